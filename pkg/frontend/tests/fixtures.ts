// Replay of wire exchanges captured from a live narwhal server, keyed
// by endpoint and canonicalized request body.

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import type { FetchFn } from '../src/api.js';

interface Exchange {
  endpoint: string;
  request: unknown;
  status: number;
  response: unknown;
}

interface FixtureFile {
  meta: {
    session: string;
    clicks: string[];
    solutionNode: string;
    solutionEdge: string;
    epsEdge: string;
    smallSession: string;
  };
  exchanges: Exchange[];
}

const here = dirname(fileURLToPath(import.meta.url));

export function loadFixtures(): FixtureFile {
  return JSON.parse(
    readFileSync(join(here, 'fixtures', 'wire.json'), 'utf-8'));
}

function canonical(value: unknown): string {
  return JSON.stringify(value, (_k, v) => {
    if (v && typeof v === 'object' && !Array.isArray(v)) {
      return Object.fromEntries(
        Object.keys(v).sort().map((k) => [k, (v as Record<string, unknown>)[k]]));
    }
    return v;
  });
}

export interface FixtureFetch {
  fetchFn: FetchFn;
  calls: { endpoint: string; body: unknown }[];
}

export function fixtureFetch(fixtures: FixtureFile): FixtureFetch {
  const byKey = new Map<string, Exchange>();
  for (const ex of fixtures.exchanges) {
    byKey.set(`${ex.endpoint}#${canonical(ex.request)}`, ex);
  }
  const calls: { endpoint: string; body: unknown }[] = [];
  const fetchFn: FetchFn = async (url, init) => {
    const endpoint = url.replace(/^.*\/api\//, '');
    const body = JSON.parse(init.body as string);
    calls.push({ endpoint, body });
    const ex = byKey.get(`${endpoint}#${canonical(body)}`);
    if (!ex) {
      throw new Error(`no fixture for ${endpoint} ${canonical(body)}`);
    }
    return new Response(JSON.stringify(ex.response), {
      status: ex.status,
      headers: { 'Content-Type': 'application/json' },
    });
  };
  return { fetchFn, calls };
}
