// View model: the session tree as last reported by the service, plus
// purely local display state. No term or substitution is ever computed
// here; everything displayed arrives verbatim over the wire.

import type { ExpandResult, WireEdge, WireNode, WireTree } from './api.js';

export interface DisplayToggles {
  stateLabels: boolean;
  ruleLabels: boolean;
  substitutions: boolean;
}

export class SessionModel {
  readonly session: string;
  readonly mode: string;
  readonly root: string;
  readonly nodes = new Map<string, WireNode>();
  readonly edges = new Map<string, WireEdge>();
  selection: string | null = null;
  viewMode: 'tree' | 'graph' = 'tree';
  toggles: DisplayToggles = {
    stateLabels: true,
    ruleLabels: true,
    substitutions: true,
  };
  zoom = 1;
  panX = 0;
  panY = 0;

  constructor(tree: WireTree) {
    this.session = tree.session;
    this.mode = tree.mode;
    this.root = tree.root;
    this.mergeTree(tree);
  }

  mergeTree(tree: WireTree): void {
    for (const n of tree.nodes) this.nodes.set(n.id, n);
    for (const e of tree.edges) this.edges.set(e.id, e);
  }

  mergeExpand(result: ExpandResult): void {
    if (result.node) this.nodes.set(result.node.id, result.node);
    for (const n of result.newNodes) {
      this.nodes.set(n.id, n);
      if (n.parent) {
        const parent = this.nodes.get(n.parent);
        if (parent && !parent.children.includes(n.id)) {
          parent.children.push(n.id);
        }
        if (parent) parent.status = 'expanded';
      }
    }
    for (const e of result.newEdges) this.edges.set(e.id, e);
  }

  setFolded(nodeId: string, folded: boolean): void {
    const node = this.nodes.get(nodeId);
    if (node) node.folded = folded;
  }

  node(id: string): WireNode {
    const n = this.nodes.get(id);
    if (!n) throw new Error(`unknown node ${id}`);
    return n;
  }

  // children in engine order, as reported by the service
  childrenOf(id: string): WireNode[] {
    return this.node(id).children.map((c) => this.node(c));
  }

  edgeInto(nodeId: string): WireEdge | null {
    for (const e of this.edges.values()) {
      if (e.target === nodeId) return e;
    }
    return null;
  }

  visibleNodeCount(): number {
    const hidden = new Set<string>();
    for (const n of this.nodes.values()) {
      if (!n.folded) continue;
      const stack = [...n.children];
      while (stack.length) {
        const id = stack.pop()!;
        hidden.add(id);
        stack.push(...this.node(id).children);
      }
    }
    return this.nodes.size - hidden.size;
  }
}
