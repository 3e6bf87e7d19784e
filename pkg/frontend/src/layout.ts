// Layered tree layout with stable left-to-right child order equal to
// the engine's discovery order. Leaves take consecutive slots; inner
// nodes sit centered above their visible children.

import type { SessionModel } from './model.js';

export interface NodePos {
  id: string;
  x: number;
  y: number;
}

export const LEVEL_HEIGHT = 90;
export const SLOT_WIDTH = 130;

export function layoutTree(model: SessionModel): Map<string, NodePos> {
  const pos = new Map<string, NodePos>();
  let nextSlot = 0;

  const place = (id: string, depth: number): number => {
    const node = model.node(id);
    const kids = node.folded ? [] : node.children;
    let x: number;
    if (kids.length === 0) {
      x = nextSlot * SLOT_WIDTH;
      nextSlot += 1;
    } else {
      const xs = kids.map((c) => place(c, depth + 1));
      x = (xs[0] + xs[xs.length - 1]) / 2;
    }
    pos.set(id, { id, x, y: depth * LEVEL_HEIGHT });
    return x;
  };

  place(model.root, 0);
  return pos;
}

// Pan offset that recenters the chosen node in a viewport.
export function centerOn(
  pos: Map<string, NodePos>,
  id: string,
  width: number,
  height: number,
): { panX: number; panY: number } {
  const p = pos.get(id);
  if (!p) return { panX: 0, panY: 0 };
  return { panX: width / 2 - p.x, panY: height / 2 - p.y };
}
