/**
 * Recorded-response fetch stub.
 *
 * Replays the exchanges captured from the real service by
 * scripts/record_fixtures.py. Requests are matched on method, path and
 * canonicalized JSON body; multiple recordings of the same request are
 * served in recorded order, so stateful sequences (empty diagnoses
 * before evidence, populated after) replay faithfully. An unmatched
 * request throws: these tests must never improvise a response.
 */

import type { FetchLike } from "../src/api.js";

export interface Exchange {
  method: string;
  path: string;
  body: unknown;
  status: number;
  response: unknown;
}

function canonical(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(canonical).join(",")}]`;
  }
  if (typeof value === "object" && value !== null) {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => `${JSON.stringify(k)}:${canonical(v)}`);
    return `{${entries.join(",")}}`;
  }
  return JSON.stringify(value);
}

function keyOf(method: string, path: string, body: unknown): string {
  return `${method.toUpperCase()} ${path} ${body == null ? "-" : canonical(body)}`;
}

export class RecordedBackend {
  private readonly pools = new Map<string, Exchange[]>();
  calls = 0;

  constructor(exchanges: Exchange[]) {
    for (const exchange of exchanges) {
      const key = keyOf(exchange.method, exchange.path, exchange.body);
      const pool = this.pools.get(key);
      if (pool === undefined) {
        this.pools.set(key, [exchange]);
      } else {
        pool.push(exchange);
      }
    }
  }

  get fetch(): FetchLike {
    return (url, init) => this.handle(url, init);
  }

  private async handle(url: string, init?: RequestInit): Promise<Response> {
    this.calls += 1;
    const parsed = new URL(url);
    const path = parsed.pathname + parsed.search;
    const method = init?.method ?? "GET";
    const body =
      typeof init?.body === "string" ? (JSON.parse(init.body) as unknown) : null;
    const key = keyOf(method, path, body);
    const pool = this.pools.get(key);
    const exchange = pool?.shift();
    if (exchange === undefined) {
      throw new Error(`no recorded exchange for: ${key}`);
    }
    return new Response(JSON.stringify(exchange.response), {
      status: exchange.status,
      headers: { "content-type": "application/json" },
    });
  }
}
