// Live integration against the real Python service: client A submits over
// HTTP, client B must have the paper rendered (reducer + scene) within the
// latency budget, and the stream-fed model must match the REST workspace.

import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { ApiClient } from "../src/api.js";
import { WorkspaceClient } from "../src/client.js";
import { renderWorkspace } from "../src/render.js";
import type { SocketLike } from "../src/client.js";

const PORT = 18700 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

const CHALLENGE = {
  id: "origin-2d",
  kind: "gaussian-proximity",
  params: { dimension: 2, target: [0.0, 0.0] },
};

let server: ChildProcess;

const makeNodeSocket = (url: string): SocketLike =>
  new WebSocket(url) as unknown as SocketLike;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 15_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/v1/unknown`);
      if (response.status === 404) return;
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error("service did not come up");
}

async function waitFor(predicate: () => boolean, timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
  throw new Error("condition not reached in time");
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "arginote-ui-"));
  const challengePath = join(dir, "challenge.json");
  writeFileSync(challengePath, JSON.stringify(CHALLENGE));
  server = spawn(
    "python3",
    [
      "-m",
      "arginote.cli",
      "serve",
      "--port",
      String(PORT),
      "--data-dir",
      join(dir, "data"),
      "--challenge",
      challengePath,
    ],
    { stdio: "inherit" },
  );
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill("SIGTERM");
});

describe("live workspace", () => {
  it("renders a peer's submission within one second", async () => {
    const api = new ApiClient(BASE);
    const { session_id } = await api.createSession("origin-2d");
    const { team_id } = await api.createTeam(session_id, "crew");
    const authorA = (await api.joinTeam(team_id, "client A")).member_id;
    await api.joinTeam(team_id, "client B");

    const clientB = new WorkspaceClient((fromSeq) => api.streamUrl(team_id, fromSeq), team_id, {
      makeSocket: makeNodeSocket,
    });
    clientB.start();
    try {
      await waitFor(() => clientB.vm.connection.connected, 5_000);
      await waitFor(() => clientB.vm.connection.lastSeq >= 4, 5_000);

      const started = Date.now();
      const submitted = await api.submitPaper(team_id, {
        author: authorA,
        title: "from client A",
        kind: "solution",
        argument: "",
        payload: { params: [0.2, 0.1] },
        citations: [],
        is_final: false,
      });
      await waitFor(() => {
        const scene = renderWorkspace(clientB.vm);
        return scene.rects.some((rect) => rect.paper === submitted.paper_id);
      }, 2_000);
      const elapsed = Date.now() - started;
      expect(elapsed).toBeLessThan(1_000);

      const scene = renderWorkspace(clientB.vm);
      const rect = scene.rects.find((r) => r.paper === submitted.paper_id)!;
      expect(rect.title).toBe("from client A");
      expect(rect.score).toBeCloseTo(0.951229424500714, 9);
    } finally {
      clientB.stop();
    }
  }, 20_000);

  it("converges with the REST workspace after a burst of submissions", async () => {
    const api = new ApiClient(BASE);
    const { session_id } = await api.createSession("origin-2d");
    const { team_id } = await api.createTeam(session_id, "burst");
    const author = (await api.joinTeam(team_id, "writer")).member_id;

    const watcher = new WorkspaceClient((fromSeq) => api.streamUrl(team_id, fromSeq), team_id, {
      makeSocket: makeNodeSocket,
    });
    watcher.start();
    try {
      await waitFor(() => watcher.vm.connection.connected, 5_000);

      let previous: string | undefined;
      for (let index = 0; index < 8; index += 1) {
        const body = {
          author,
          title: `burst ${index}`,
          kind: index === 7 ? ("argument" as const) : ("solution" as const),
          argument: index === 7 ? "closing" : "",
          citations: previous && index % 2 === 0 ? [previous] : [],
          is_final: index === 7,
          ...(index === 7 ? {} : { payload: { params: [index / 10, 0] } }),
        };
        previous = (await api.submitPaper(team_id, body)).paper_id;
      }

      await waitFor(() => watcher.vm.papers.length === 8, 5_000);
      const rest = await api.workspace(team_id);

      expect(watcher.vm.papers.map((p) => p.id)).toEqual(rest.papers.map((p) => p.id));
      const vmEdges = watcher.vm.papers.flatMap((p) => p.cites.map((c) => [p.id, c]));
      expect(vmEdges).toEqual(rest.edges);

      const scene = renderWorkspace(watcher.vm);
      expect(scene.rects).toHaveLength(rest.papers.length);
      expect(scene.links).toHaveLength(rest.edges.length);
      expect(scene.stars).toHaveLength(1);
    } finally {
      watcher.stop();
    }
  }, 20_000);
});
