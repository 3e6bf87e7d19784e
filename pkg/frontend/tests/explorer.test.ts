// Scripted-click walkthrough of the augmented palindrome grammar
// session against wire exchanges captured from a live server.

import { beforeEach, describe, expect, it } from 'vitest';
import { ApiClient } from '../src/api.js';
import { DEFAULT_EXPAND_DEPTH, Explorer } from '../src/app.js';
import { fixtureFetch, loadFixtures } from './fixtures.js';

const fixtures = loadFixtures();
const { meta } = fixtures;

function createRequestFor(session: string) {
  const ex = fixtures.exchanges.find(
    (e) => e.endpoint === 'create-session' &&
      (e.response as { session: string }).session === session);
  if (!ex) throw new Error(`no create-session fixture for ${session}`);
  return ex.request as Parameters<ApiClient['createSession']>[0];
}

describe('explorer session walkthrough', () => {
  let explorer: Explorer;
  let calls: { endpoint: string; body: unknown }[];

  beforeEach(async () => {
    document.body.innerHTML = '<div id="root"></div>';
    const ff = fixtureFetch(fixtures);
    calls = ff.calls;
    explorer = new Explorer(
      document.getElementById('root')!,
      new ApiClient('', ff.fetchFn));
    await explorer.load(createRequestFor(meta.session));
  });

  async function runClicks() {
    for (const nodeId of meta.clicks) {
      await explorer.nodeClick(nodeId);
    }
  }

  it('renders the root-only tree after load', () => {
    expect(explorer.svg.querySelectorAll('[data-node]')).toHaveLength(1);
    expect(explorer.svg.querySelector('[data-node="s1"]')).not.toBeNull();
  });

  it('shows the solution node green after the scripted clicks', async () => {
    await runClicks();
    const el = explorer.svg.querySelector(
      `[data-node="${meta.solutionNode}"]`)!;
    expect(el.getAttribute('class')).toContain('solution');
    expect(el.querySelector('circle')!.getAttribute('fill')).toBe('green');
    // non-solution siblings stay white
    const root = explorer.svg.querySelector('[data-node="s1"]')!;
    expect(root.querySelector('circle')!.getAttribute('fill')).toBe('#fff');
  });

  it('shows the full transition record for the solution edge', async () => {
    await runClicks();
    await explorer.openTransitionRecord(meta.solutionEdge);
    const table = explorer.panel.querySelector('table.transition-record')!;
    expect(table).not.toBeNull();
    const text = table.textContent!;
    expect(text).toContain('rule');
    expect(text).toContain('ruleSubstitution');
    expect(text).toContain('computedNarrowingSubstitution');
    expect(text).toContain('targetUnifier');
    expect(text).toContain('answer');
    // the missing production S -> 1 is read off the answer
    const answer = table.querySelector('tr.field-answer td')!.textContent!;
    expect(answer).toContain('N:NSymbol / S');
    expect(answer).toContain('T:TSymbol / 1');
  });

  it('defaults the Expand Subtree picker to 3', () => {
    explorer.openNodeMenu('s1');
    const picker = explorer.menu.querySelector<HTMLInputElement>(
      'input.depth-picker')!;
    expect(picker.value).toBe(String(DEFAULT_EXPAND_DEPTH));
    expect(picker.min).toBe('1');
    expect(picker.max).toBe('5');
  });

  it('sends depth 3 when the picker is left untouched', async () => {
    // captured against the small rewriting session, where depth 3 is cheap
    const ff = fixtureFetch(fixtures);
    const small = new Explorer(
      document.getElementById('root')!,
      new ApiClient('', ff.fetchFn));
    await small.load(createRequestFor(meta.smallSession));
    small.openNodeMenu('s1');
    small.menu.querySelector<HTMLButtonElement>(
      '.expand-subtree button')!.click();
    await new Promise((r) => setTimeout(r));
    const sent = ff.calls.find((c) => c.endpoint === 'expand-subtree')!;
    expect((sent.body as { depth: number }).depth).toBe(3);
    expect(small.svg.querySelectorAll('[data-node]').length)
      .toBeGreaterThan(1);
  });

  it('rejects depth 6 client-side without a wire call', async () => {
    explorer.openNodeMenu('s1');
    const before = calls.length;
    await explorer.expandSubtree('s1', 6);
    expect(calls.length).toBe(before);
    const banner = explorer.banners.querySelector('.banner')!;
    expect(banner.textContent).toContain('between 1 and 5');
  });

  it('is rejected by the server too when depth 6 is forced', async () => {
    await runClicks();
    await explorer.expandSubtree(meta.solutionNode, 6 as number);
    // client blocks it; issue the raw call to show the server agrees
    const api = new ApiClient('', fixtureFetch(fixtures).fetchFn);
    await expect(
      api.expandSubtree(meta.session, meta.solutionNode, 6),
    ).rejects.toMatchObject({ code: 'depth-out-of-range', status: 400 });
  });

  it('shows the eps-eps-eps chain behind + on a normalizing edge', async () => {
    await runClicks();
    const plus = explorer.svg.querySelector(
      `.plus[data-edge="${meta.epsEdge}"]`)!;
    expect(plus).not.toBeNull();
    await explorer.openInstrumentedView(meta.epsEdge);
    const chain = explorer.panel.querySelectorAll('li.instrumented-node');
    expect(chain.length).toBe(3);
    expect(chain[0].textContent).toContain('eps eps eps');
    expect(chain[1].textContent).toContain('eps eps');
    expect(chain[2].textContent!.startsWith('eps @')).toBe(true);
    for (const li of chain) {
      expect((li as HTMLElement).style.background).toBe('lightblue');
    }
  });

  it('highlights the witness branch in the unifier sub-session', async () => {
    await runClicks();
    await explorer.openUnifierView(meta.epsEdge);
    const highlighted = explorer.panel.querySelectorAll('.fv-node.highlighted');
    expect(highlighted.length).toBeGreaterThan(0);
    expect(explorer.panel.textContent).toContain('Unifier session');
  });

  it('keeps tree and graph cardinalities consistent', async () => {
    await runClicks();
    const visible = explorer.model!.visibleNodeCount();
    await explorer.toggleViewMode();
    const groups = explorer.svg.querySelectorAll('.graph-node');
    let members = 0;
    const ex = fixtures.exchanges.find(
      (e) => e.endpoint === 'graph-view' &&
        (e.request as { session: string }).session === meta.session)!;
    for (const n of (ex.response as { nodes: { members: string[] }[] }).nodes) {
      members += n.members.length;
    }
    expect(members).toBe(visible);
    expect(groups.length).toBeGreaterThan(0);
    expect(groups.length).toBeLessThanOrEqual(visible);
  });

  it('toggling substitutions off re-renders without a wire call', async () => {
    await runClicks();
    expect(explorer.svg.querySelectorAll('.subst-label').length)
      .toBeGreaterThan(0);
    const before = calls.length;
    explorer.setToggle('substitutions', false);
    expect(calls.length).toBe(before);
    expect(explorer.svg.querySelectorAll('.subst-label')).toHaveLength(0);
  });
});
