/**
 * Cockpit protocol client over any WebSocket-shaped socket (the
 * browser's WebSocket or the `ws` package in tests).  Sends input
 * frames at the tick rate and forwards parsed server messages.
 */

import { InputPayload, ProtocolError, ServerMessage, encodeInput, parseServerMessage } from "./protocol.js";

/** The subset of the WebSocket API the client needs. */
export interface SocketLike {
    send(data: string): void;
    close(): void;
    onmessage: ((ev: { data: unknown }) => void) | null;
    onopen: ((ev: unknown) => void) | null;
    onclose: ((ev: unknown) => void) | null;
    readyState: number;
}

export const INPUT_RATE_HZ = 50;

export type MessageHandler = (msg: ServerMessage) => void;

export class CockpitClient {
    private handlers: MessageHandler[] = [];
    private timer: ReturnType<typeof setInterval> | null = null;
    private inputSource: (() => Omit<InputPayload, "t_client">) | null = null;
    closed = false;

    constructor(
        private socket: SocketLike,
        private clock: () => number = () => Date.now(),
    ) {
        socket.onmessage = (ev) => {
            const text = typeof ev.data === "string" ? ev.data : String(ev.data);
            let msg: ServerMessage;
            try {
                msg = parseServerMessage(text);
            } catch (e) {
                if (e instanceof ProtocolError) return; // tolerate garbage, keep flying
                throw e;
            }
            for (const h of this.handlers) h(msg);
        };
        socket.onclose = () => {
            this.closed = true;
            this.stopStreaming();
        };
    }

    onMessage(handler: MessageHandler): void {
        this.handlers.push(handler);
    }

    /** Send one input frame immediately, stamped with the client clock. */
    sendInput(input: Omit<InputPayload, "t_client">): number {
        const t_client = this.clock();
        this.socket.send(encodeInput({ t_client, ...input }));
        return t_client;
    }

    /** Poll an input source at the tick rate and stream it to the server. */
    startStreaming(source: () => Omit<InputPayload, "t_client">, rateHz = INPUT_RATE_HZ): void {
        this.inputSource = source;
        this.stopTimer();
        this.sendInput(source()); // first sample leaves immediately
        this.timer = setInterval(() => {
            if (!this.closed && this.inputSource) this.sendInput(this.inputSource());
        }, 1000 / rateHz);
    }

    stopStreaming(): void {
        this.stopTimer();
        this.inputSource = null;
    }

    private stopTimer(): void {
        if (this.timer !== null) {
            clearInterval(this.timer);
            this.timer = null;
        }
    }

    close(): void {
        this.stopStreaming();
        this.closed = true;
        this.socket.close();
    }
}
