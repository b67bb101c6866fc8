// Live workspace connection: one socket, the pure reducer as the only state
// mutator, automatic resubscribe from the last applied seq on any gap or
// connection loss. Papers appear only via the stream (no optimistic UI), so
// every teammate converges on the same model.

import { applyStreamEvent, initialViewModel, setConnected } from "./state.js";
import type { StreamMessage, WorkspaceViewModel } from "./types.js";

export interface SocketLike {
  onmessage: ((event: { data: unknown }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface WorkspaceClientOptions {
  makeSocket?: SocketFactory;
  reconnectDelayMs?: number;
  onChange?: (vm: WorkspaceViewModel) => void;
}

const defaultFactory: SocketFactory = (url) =>
  new WebSocket(url) as unknown as SocketLike;

export class WorkspaceClient {
  vm: WorkspaceViewModel;
  private socket: SocketLike | null = null;
  private stopped = false;
  private readonly makeSocket: SocketFactory;
  private readonly reconnectDelayMs: number;
  private readonly onChange?: (vm: WorkspaceViewModel) => void;

  constructor(
    private readonly streamUrl: (fromSeq: number) => string,
    team: string,
    options: WorkspaceClientOptions = {},
  ) {
    this.vm = initialViewModel(team);
    this.makeSocket = options.makeSocket ?? defaultFactory;
    this.reconnectDelayMs = options.reconnectDelayMs ?? 500;
    this.onChange = options.onChange;
  }

  start(): void {
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    this.socket?.close();
    this.socket = null;
  }

  private update(vm: WorkspaceViewModel): void {
    if (vm === this.vm) return;
    this.vm = vm;
    this.onChange?.(vm);
  }

  private connect(): void {
    const socket = this.makeSocket(this.streamUrl(this.vm.connection.lastSeq));
    this.socket = socket;
    socket.onopen = () => this.update(setConnected(this.vm, true));
    socket.onclose = () => {
      this.update(setConnected(this.vm, false));
      if (!this.stopped) {
        setTimeout(() => this.connect(), this.reconnectDelayMs);
      }
    };
    socket.onmessage = (event) => {
      const message = JSON.parse(String(event.data)) as StreamMessage;
      if (message.type !== "event") {
        return; // heartbeat: liveness only
      }
      const result = applyStreamEvent(this.vm, message);
      if (result.status === "gap") {
        // Missed events: drop this socket and backfill from last applied seq.
        socket.onclose = null;
        socket.close();
        this.update(setConnected(this.vm, false));
        if (!this.stopped) {
          this.connect();
        }
        return;
      }
      this.update(result.vm);
    };
  }
}
