// Typed client for the narwhal wire API. All engine work happens
// server-side; this module only moves JSON.

export type Substitution = Record<string, string>;

export interface WireNode {
  id: string;
  term: string;
  depth: number;
  status: string;
  solution: boolean;
  folded: boolean;
  parent: string | null;
  children: string[];
  substitution: Substitution | null;
  answer?: Substitution;
}

export interface WireEdge {
  id: string;
  source: string;
  target: string;
  kind: 'narrowing' | 'rewriting' | 'fv';
  rule?: string;
  equation?: string;
  position?: string;
  incompleteUnifierSet?: boolean;
}

export interface WireTree {
  session: string;
  mode: string;
  root: string;
  nodes: WireNode[];
  edges: WireEdge[];
}

export interface CreateSessionResult {
  session: string;
  mode: string;
  root: string;
  rootTerm: string;
  goal: string | null;
  diagnostics: { level: string; code: string; message: string }[];
  tree: WireTree;
}

export interface ExpandResult {
  node?: WireNode;
  root?: string;
  depth?: number;
  newNodes: WireNode[];
  newEdges: WireEdge[];
}

export interface TransitionRecord {
  edge: string;
  source: string;
  target: string;
  kind: string;
  term: string;
  rule: { label: string; lhs: string; rhs: string } | null;
  position: string | null;
  ruleSubstitution: Substitution | null;
  inputTermSubstitution: Substitution | null;
  computedNarrowingSubstitution: Substitution | null;
  targetUnifier: Substitution | null;
  answer: Substitution | null;
  matcher: Substitution | null;
  equationLabel: string | null;
  incompleteUnifierSet: boolean;
}

export interface InstrumentedStep {
  source: string;
  equation: string;
  position: string;
  matcher: Substitution | null;
  result: string;
}

export interface InstrumentedView {
  edge: string;
  initial: string;
  final: string;
  steps: InstrumentedStep[];
}

export interface UnifierView {
  session: string;
  root: string;
  highlightedBranch: string[];
  unifier: Substitution;
  tree: WireTree;
}

export interface GraphView {
  nodes: { id: string; term: string; members: string[]; solution: boolean }[];
  edges: { id: string; source: string; target: string; kind: string }[];
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

export type FetchFn = (url: string, init: RequestInit) => Promise<Response>;

export interface CreateSessionParams {
  module: string;
  mode: string;
  inputTerm: string;
  targetTerm?: string;
  maxDepth?: number;
  maxCount?: number;
  assocBound?: number;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchFn = (url, init) => fetch(url, init),
  ) {}

  private async post<T>(endpoint: string, body: unknown): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/${endpoint}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    const data = await resp.json();
    if (!resp.ok) {
      throw new ApiError(
        data.error ?? 'unknown', data.message ?? resp.statusText, resp.status);
    }
    return data as T;
  }

  createSession(params: CreateSessionParams): Promise<CreateSessionResult> {
    return this.post('create-session', params);
  }

  expandNode(session: string, node: string): Promise<ExpandResult> {
    return this.post('expand-node', { session, node });
  }

  expandSubtree(session: string, node: string, depth: number): Promise<ExpandResult> {
    return this.post('expand-subtree', { session, node, depth });
  }

  foldNode(session: string, node: string): Promise<{ node: string; folded: boolean }> {
    return this.post('fold-node', { session, node });
  }

  unfoldNode(session: string, node: string): Promise<{ node: string; folded: boolean }> {
    return this.post('unfold-node', { session, node });
  }

  inspectTransition(session: string, edge: string): Promise<TransitionRecord> {
    return this.post('inspect-transition', { session, edge });
  }

  inspectUnifier(session: string, edge: string): Promise<UnifierView> {
    return this.post('inspect-unifier', { session, edge });
  }

  instrumentedView(session: string, edge: string): Promise<InstrumentedView> {
    return this.post('instrumented-view', { session, edge });
  }

  graphView(session: string): Promise<GraphView> {
    return this.post('graph-view', { session });
  }

  showProgram(session: string): Promise<{ original: string; transformed: string }> {
    return this.post('show-program', { session });
  }

  tree(session: string): Promise<WireTree> {
    return this.post('tree', { session });
  }
}
