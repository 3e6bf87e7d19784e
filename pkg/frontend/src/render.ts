// SVG rendering of session trees, the graph view, and the inspector
// panels. Solution nodes are green; instrumented chains are light blue.

import type {
  GraphView,
  InstrumentedView,
  Substitution,
  TransitionRecord,
  UnifierView,
  WireEdge,
} from './api.js';
import { layoutTree, LEVEL_HEIGHT } from './layout.js';
import type { SessionModel } from './model.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const SUBST_TRUNCATE = 60;

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

export function formatSubst(s: Substitution | null | undefined): string {
  if (!s) return '';
  const inner = Object.entries(s).map(([v, t]) => `${v} / ${t}`).join(', ');
  return `{${inner}}`;
}

function truncated(text: string): { shown: string; full: string } {
  if (text.length <= SUBST_TRUNCATE) return { shown: text, full: text };
  return { shown: text.slice(0, SUBST_TRUNCATE - 1) + '…', full: text };
}

export function renderTree(model: SessionModel, svg: SVGSVGElement): void {
  svg.textContent = '';
  const scene = svgEl('g', { class: 'scene' });
  scene.setAttribute(
    'transform',
    `translate(${model.panX},${model.panY}) scale(${model.zoom})`);
  svg.appendChild(scene);

  const pos = layoutTree(model);

  for (const edge of model.edges.values()) {
    const a = pos.get(edge.source);
    const b = pos.get(edge.target);
    if (!a || !b) continue; // inside a folded subtree
    const g = svgEl('g', { class: `edge kind-${edge.kind}` });
    g.setAttribute('data-edge', edge.id);
    g.appendChild(svgEl('line', {
      x1: a.x, y1: a.y, x2: b.x, y2: b.y, stroke: '#555',
    }));
    const mx = (a.x + b.x) / 2;
    const my = (a.y + b.y) / 2;
    if (model.toggles.ruleLabels) {
      const label = edge.rule ?? edge.equation ?? '';
      const text = svgEl('text', { x: mx + 6, y: my, class: 'edge-label' });
      text.textContent = edge.incompleteUnifierSet ? `${label} (≤)` : label;
      g.appendChild(text);
    }
    // the + affordance opens the instrumented simplification chain
    const plus = svgEl('text', {
      x: mx - 14, y: my, class: 'plus', cursor: 'pointer',
    });
    plus.textContent = '+';
    plus.setAttribute('data-edge', edge.id);
    g.appendChild(plus);
    scene.appendChild(g);
  }

  for (const p of pos.values()) {
    const node = model.node(p.id);
    const classes = ['node', `status-${node.status}`];
    if (node.solution) classes.push('solution');
    if (node.folded) classes.push('folded');
    if (model.selection === p.id) classes.push('selected');
    const g = svgEl('g', {
      class: classes.join(' '),
      transform: `translate(${p.x},${p.y})`,
    });
    g.setAttribute('data-node', p.id);
    g.appendChild(svgEl('circle', {
      r: 16,
      fill: node.solution ? 'green' : node.folded ? '#bbb' : '#fff',
      stroke: model.selection === p.id ? '#d32f2f' : '#333',
      'stroke-width': model.selection === p.id ? 3 : 1.5,
    }));
    if (model.toggles.stateLabels) {
      const label = svgEl('text', { y: 5, class: 'state-label' });
      label.textContent = node.id;
      g.appendChild(label);
    }
    const term = svgEl('text', { y: 32, class: 'term-label' });
    term.textContent = node.term;
    g.appendChild(term);
    if (model.toggles.substitutions && node.substitution &&
        Object.keys(node.substitution).length) {
      const { shown, full } = truncated(formatSubst(node.substitution));
      const sub = svgEl('text', { y: 48, class: 'subst-label' });
      sub.textContent = shown;
      const title = svgEl('title');
      title.textContent = full; // expand-on-hover for large substitutions
      sub.appendChild(title);
      g.appendChild(sub);
    }
    scene.appendChild(g);
  }
}

export function renderGraph(view: GraphView, model: SessionModel,
                            svg: SVGSVGElement): void {
  svg.textContent = '';
  const scene = svgEl('g', { class: 'scene' });
  scene.setAttribute(
    'transform',
    `translate(${model.panX},${model.panY}) scale(${model.zoom})`);
  svg.appendChild(scene);

  const pos = new Map<string, { x: number; y: number }>();
  view.nodes.forEach((n, i) => {
    pos.set(n.id, { x: (i % 5) * 160, y: Math.floor(i / 5) * LEVEL_HEIGHT });
  });

  for (const e of view.edges) {
    const a = pos.get(e.source)!;
    const b = pos.get(e.target)!;
    const line = svgEl('line', {
      x1: a.x, y1: a.y, x2: b.x, y2: b.y,
      stroke: '#555', class: `graph-edge kind-${e.kind}`,
    });
    line.setAttribute('data-edge', e.id);
    scene.appendChild(line);
  }
  for (const n of view.nodes) {
    const p = pos.get(n.id)!;
    const g = svgEl('g', {
      class: n.solution ? 'graph-node solution' : 'graph-node',
      transform: `translate(${p.x},${p.y})`,
    });
    g.setAttribute('data-node', n.id);
    g.appendChild(svgEl('circle', {
      r: 16, fill: n.solution ? 'green' : '#fff', stroke: '#333',
    }));
    const label = svgEl('text', { y: 5 });
    label.textContent =
      n.members.length > 1 ? `${n.id} (${n.members.length})` : n.id;
    g.appendChild(label);
    const term = svgEl('text', { y: 32, class: 'term-label' });
    term.textContent = n.term;
    g.appendChild(term);
    scene.appendChild(g);
  }
}

function row(table: HTMLTableElement, name: string, value: string): void {
  const tr = document.createElement('tr');
  tr.className = `field-${name}`;
  const th = document.createElement('th');
  th.textContent = name;
  const td = document.createElement('td');
  td.textContent = value;
  tr.append(th, td);
  table.appendChild(tr);
}

export function renderTransitionRecord(rec: TransitionRecord,
                                       panel: HTMLElement): void {
  panel.textContent = '';
  const h = document.createElement('h3');
  h.textContent = `Transition ${rec.edge}: ${rec.source} → ${rec.target}`;
  panel.appendChild(h);
  const table = document.createElement('table');
  table.className = 'transition-record';
  row(table, 'kind', rec.kind);
  row(table, 'term', rec.term);
  if (rec.rule) row(table, 'rule', `[${rec.rule.label}] ${rec.rule.lhs} => ${rec.rule.rhs}`);
  if (rec.equationLabel) row(table, 'equation', rec.equationLabel);
  if (rec.position !== null) row(table, 'position', rec.position);
  if (rec.ruleSubstitution) row(table, 'ruleSubstitution', formatSubst(rec.ruleSubstitution));
  if (rec.inputTermSubstitution) row(table, 'inputTermSubstitution', formatSubst(rec.inputTermSubstitution));
  if (rec.computedNarrowingSubstitution) row(table, 'computedNarrowingSubstitution', formatSubst(rec.computedNarrowingSubstitution));
  if (rec.targetUnifier) row(table, 'targetUnifier', formatSubst(rec.targetUnifier));
  if (rec.answer) row(table, 'answer', formatSubst(rec.answer));
  if (rec.matcher) row(table, 'matcher', formatSubst(rec.matcher));
  if (rec.incompleteUnifierSet) row(table, 'incompleteUnifierSet', 'true');
  panel.appendChild(table);
}

// The instrumented sequence renders as a chain of light blue nodes.
export function renderInstrumentedView(view: InstrumentedView,
                                       panel: HTMLElement): void {
  panel.textContent = '';
  const h = document.createElement('h3');
  h.textContent = `Instrumented view of ${view.edge}`;
  panel.appendChild(h);
  const chain = document.createElement('ol');
  chain.className = 'instrumented-chain';
  const terms = [view.initial, ...view.steps.map((s) => s.result)];
  terms.forEach((term, i) => {
    const li = document.createElement('li');
    li.className = 'instrumented-node';
    li.style.background = 'lightblue';
    li.textContent = term;
    if (i < view.steps.length) {
      const s = view.steps[i];
      li.setAttribute('data-equation', s.equation);
      li.setAttribute('data-position', s.position);
    }
    chain.appendChild(li);
  });
  panel.appendChild(chain);
}

export function renderUnifierView(view: UnifierView,
                                  panel: HTMLElement): void {
  panel.textContent = '';
  const h = document.createElement('h3');
  h.textContent = `Unifier session ${view.session}`;
  panel.appendChild(h);
  const u = document.createElement('p');
  u.className = 'unifier';
  u.textContent = formatSubst(view.unifier);
  panel.appendChild(u);
  const list = document.createElement('ul');
  list.className = 'unifier-tree';
  const highlighted = new Set(view.highlightedBranch);
  for (const n of view.tree.nodes) {
    const li = document.createElement('li');
    li.setAttribute('data-node', n.id);
    li.className = highlighted.has(n.id) ? 'fv-node highlighted' : 'fv-node';
    li.textContent = `${n.id}: ${n.term}`;
    list.appendChild(li);
  }
  panel.appendChild(list);
}

export function showBanner(container: HTMLElement, message: string): void {
  const banner = document.createElement('div');
  banner.className = 'banner';
  banner.textContent = message;
  const close = document.createElement('button');
  close.textContent = '×';
  close.addEventListener('click', () => banner.remove());
  banner.appendChild(close);
  container.appendChild(banner);
}
