/**
 * Server transport: request/response over POST /rpc plus a WebSocket
 * for per-turn pushes. Every message carries the protocol version.
 */

import {
  OrderAck,
  PROTOCOL_VERSION,
  StateView,
  TurnMessage,
  isOrderAck,
  isStateView,
  isTurnMessage,
} from './protocol';

export class ProtocolError extends Error {
  constructor(public code: string, detail: string) {
    super(`${code}: ${detail}`);
  }
}

type Json = Record<string, unknown>;

export class RpcClient {
  constructor(private baseUrl: string) {}

  async call(message: Json): Promise<Json> {
    const response = await fetch(`${this.baseUrl}/rpc`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ v: PROTOCOL_VERSION, ...message }),
    });
    const payload = (await response.json()) as Json;
    if (payload.type === 'error') {
      throw new ProtocolError(String(payload.code), String(payload.detail));
    }
    return payload;
  }

  async createSession(mapText: string, config: Json, seed: number,
                      tickRate = 2.0): Promise<string> {
    const reply = await this.call({
      type: 'create', map_text: mapText, config, seed, tick_rate: tickRate,
    });
    return String(reply.session);
  }

  async start(session: string, run = true): Promise<void> {
    await this.call({ type: 'start', session, run });
  }

  async order(session: string, units: number[], action: number): Promise<OrderAck> {
    const reply = await this.call({ type: 'order', session, units, action });
    if (!isOrderAck(reply)) throw new ProtocolError('BadReply', 'malformed ack');
    return reply;
  }

  async view(session: string, army: 'vp' | 'hp' = 'hp'): Promise<StateView> {
    const reply = await this.call({ type: 'view', session, army });
    if (!isStateView(reply.view)) throw new ProtocolError('BadReply', 'malformed view');
    return reply.view;
  }

  async advance(session: string): Promise<TurnMessage> {
    const reply = await this.call({ type: 'advance', session });
    if (!isTurnMessage(reply)) throw new ProtocolError('BadReply', 'malformed turn');
    return reply;
  }

  async rounds(): Promise<Json[]> {
    const reply = await this.call({ type: 'rounds' });
    return (reply.rounds as Json[]) ?? [];
  }

  async pmeaNext(): Promise<string> {
    const reply = await this.call({ type: 'pmea-next' });
    return String(reply.session);
  }
}

export type TurnHandler = (msg: TurnMessage) => void;

/** Subscribes to one session's turn stream; reconnect-safe by design
 * (the server pushes full views, so the latest message rebuilds the
 * whole board). */
export function connectTurnStream(
  baseUrl: string,
  session: string,
  army: 'vp' | 'hp',
  onTurn: TurnHandler,
  WebSocketImpl: typeof WebSocket = WebSocket,
): WebSocket {
  const wsUrl = baseUrl.replace(/^http/, 'ws');
  const socket = new WebSocketImpl(`${wsUrl}/ws?session=${session}&army=${army}`);
  socket.onmessage = (event: MessageEvent) => {
    const payload = JSON.parse(String(event.data));
    if (isTurnMessage(payload)) onTurn(payload);
  };
  return socket;
}
