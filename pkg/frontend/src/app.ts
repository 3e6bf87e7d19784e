// Explorer: wires clicks to wire calls. Every action maps to exactly
// one endpoint; engine state lives server-side only.

import { ApiClient, ApiError, CreateSessionParams } from './api.js';
import { centerOn, layoutTree } from './layout.js';
import { SessionModel } from './model.js';
import {
  renderGraph,
  renderInstrumentedView,
  renderTransitionRecord,
  renderTree,
  renderUnifierView,
  showBanner,
} from './render.js';

export const DEFAULT_EXPAND_DEPTH = 3;
export const MIN_EXPAND_DEPTH = 1;
export const MAX_EXPAND_DEPTH = 5;

export class Explorer {
  model: SessionModel | null = null;
  readonly svg: SVGSVGElement;
  readonly panel: HTMLElement;
  readonly banners: HTMLElement;
  readonly menu: HTMLElement;
  private busy = false; // one in-flight mutation per session

  constructor(
    readonly container: HTMLElement,
    readonly api: ApiClient,
  ) {
    this.svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
    this.svg.setAttribute('class', 'explorer-canvas');
    this.panel = document.createElement('div');
    this.panel.className = 'inspector-panel';
    this.banners = document.createElement('div');
    this.banners.className = 'banners';
    this.menu = document.createElement('div');
    this.menu.className = 'context-menu';
    this.menu.hidden = true;
    container.append(this.banners, this.svg, this.panel, this.menu);

    this.svg.addEventListener('click', (ev) => this.onClick(ev));
    this.svg.addEventListener('contextmenu', (ev) => this.onContextMenu(ev));
    container.addEventListener('keydown', (ev) => this.onKey(ev));
  }

  async load(params: CreateSessionParams): Promise<void> {
    const created = await this.api.createSession(params);
    this.model = new SessionModel(created.tree);
    for (const d of created.diagnostics) {
      showBanner(this.banners, `${d.level}: ${d.message}`);
    }
    this.render();
  }

  render(): void {
    if (!this.model) return;
    if (this.model.viewMode === 'tree') {
      renderTree(this.model, this.svg);
    }
  }

  private fail(err: unknown): void {
    const msg = err instanceof ApiError
      ? `${err.code}: ${err.message}` : String(err);
    showBanner(this.banners, msg);
  }

  private async mutate(go: () => Promise<void>): Promise<void> {
    if (this.busy || !this.model) return;
    this.busy = true;
    try {
      await go();
    } catch (err) {
      this.fail(err);
    } finally {
      this.busy = false;
    }
    this.render();
  }

  private onClick(ev: Event): void {
    const target = ev.target as Element;
    const plus = target.closest('[class~="plus"]');
    if (plus) {
      void this.openInstrumentedView(plus.getAttribute('data-edge')!);
      return;
    }
    const nodeEl = target.closest('[data-node]');
    if (nodeEl) {
      void this.nodeClick(nodeEl.getAttribute('data-node')!);
      return;
    }
    const edgeEl = target.closest('[data-edge]');
    if (edgeEl) {
      void this.openTransitionRecord(edgeEl.getAttribute('data-edge')!);
    }
  }

  async nodeClick(nodeId: string): Promise<void> {
    await this.mutate(async () => {
      const m = this.model!;
      m.selection = nodeId;
      if (m.node(nodeId).status === 'unexpanded') {
        m.mergeExpand(await this.api.expandNode(m.session, nodeId));
      }
      this.recenter(nodeId);
    });
  }

  recenter(nodeId: string): void {
    const m = this.model!;
    const rect = this.svg.getBoundingClientRect();
    const { panX, panY } = centerOn(
      layoutTree(m), nodeId, rect.width || 800, rect.height || 600);
    m.panX = panX;
    m.panY = panY;
  }

  // -- context menu -----------------------------------------------------------

  private onContextMenu(ev: Event): void {
    ev.preventDefault();
    const target = ev.target as Element;
    const nodeEl = target.closest('[data-node]');
    if (nodeEl) {
      this.openNodeMenu(nodeEl.getAttribute('data-node')!);
      return;
    }
    const edgeEl = target.closest('[data-edge]');
    if (edgeEl) this.openEdgeMenu(edgeEl.getAttribute('data-edge')!);
  }

  openNodeMenu(nodeId: string): void {
    const m = this.model!;
    const node = m.node(nodeId);
    this.menu.textContent = '';
    this.menu.hidden = false;

    const expand = document.createElement('div');
    expand.className = 'menu-item expand-subtree';

    const button = document.createElement('button');
    button.textContent = 'Expand Subtree';
    const depth = document.createElement('input');
    depth.type = 'number';
    depth.className = 'depth-picker';
    depth.min = String(MIN_EXPAND_DEPTH);
    depth.max = String(MAX_EXPAND_DEPTH);
    depth.value = String(DEFAULT_EXPAND_DEPTH);
    button.addEventListener('click', () => {
      void this.expandSubtree(nodeId, Number(depth.value));
    });
    expand.append(button, depth);
    this.menu.appendChild(expand);

    const fold = document.createElement('button');
    fold.className = 'menu-item fold-node';
    fold.textContent = node.folded ? 'Unfold Node' : 'Fold Node';
    fold.disabled = node.children.length === 0;
    fold.addEventListener('click', () => {
      void this.toggleFold(nodeId);
    });
    this.menu.appendChild(fold);
  }

  openEdgeMenu(edgeId: string): void {
    const m = this.model!;
    const edge = m.edges.get(edgeId)!;
    this.menu.textContent = '';
    this.menu.hidden = false;
    const inspect = document.createElement('button');
    inspect.className = 'menu-item inspect-transition';
    inspect.textContent = 'Inspect Transition';
    inspect.addEventListener('click', () => {
      void this.openTransitionRecord(edgeId);
    });
    const unifier = document.createElement('button');
    unifier.className = 'menu-item inspect-unifier';
    unifier.textContent = 'Inspect Unifier';
    unifier.disabled = edge.kind !== 'narrowing';
    unifier.addEventListener('click', () => {
      void this.openUnifierView(edgeId);
    });
    this.menu.append(inspect, unifier);
  }

  async expandSubtree(nodeId: string, depth: number): Promise<void> {
    if (depth < MIN_EXPAND_DEPTH || depth > MAX_EXPAND_DEPTH) {
      showBanner(
        this.banners,
        `depth must be between ${MIN_EXPAND_DEPTH} and ${MAX_EXPAND_DEPTH}`);
      return;
    }
    this.menu.hidden = true;
    await this.mutate(async () => {
      const m = this.model!;
      m.mergeExpand(await this.api.expandSubtree(m.session, nodeId, depth));
    });
  }

  async toggleFold(nodeId: string): Promise<void> {
    this.menu.hidden = true;
    await this.mutate(async () => {
      const m = this.model!;
      const result = m.node(nodeId).folded
        ? await this.api.unfoldNode(m.session, nodeId)
        : await this.api.foldNode(m.session, nodeId);
      m.setFolded(nodeId, result.folded);
    });
  }

  // -- inspections (may overlap; not serialized through mutate) ---------------

  async openTransitionRecord(edgeId: string): Promise<void> {
    try {
      const rec = await this.api.inspectTransition(this.model!.session, edgeId);
      renderTransitionRecord(rec, this.panel);
    } catch (err) {
      this.fail(err);
    }
  }

  async openInstrumentedView(edgeId: string): Promise<void> {
    try {
      const view = await this.api.instrumentedView(this.model!.session, edgeId);
      renderInstrumentedView(view, this.panel);
    } catch (err) {
      this.fail(err);
    }
  }

  async openUnifierView(edgeId: string): Promise<void> {
    this.menu.hidden = true;
    try {
      const view = await this.api.inspectUnifier(this.model!.session, edgeId);
      renderUnifierView(view, this.panel);
    } catch (err) {
      this.fail(err);
    }
  }

  async toggleViewMode(): Promise<void> {
    const m = this.model!;
    if (m.viewMode === 'tree') {
      try {
        const view = await this.api.graphView(m.session);
        m.viewMode = 'graph';
        renderGraph(view, m, this.svg);
      } catch (err) {
        this.fail(err);
      }
    } else {
      m.viewMode = 'tree';
      this.render();
    }
  }

  setToggle(name: keyof SessionModel['toggles'], value: boolean): void {
    // display-only: re-render from cached wire data, no network call
    this.model!.toggles[name] = value;
    this.render();
  }

  private onKey(ev: KeyboardEvent): void {
    const m = this.model;
    if (!m) return;
    const step = 40;
    if (ev.key === 'ArrowLeft') m.panX += step;
    else if (ev.key === 'ArrowRight') m.panX -= step;
    else if (ev.key === 'ArrowUp') m.panY += step;
    else if (ev.key === 'ArrowDown') m.panY -= step;
    else if (ev.key === '+') m.zoom *= 1.2;
    else if (ev.key === '-') m.zoom /= 1.2;
    else return;
    this.render();
  }
}
