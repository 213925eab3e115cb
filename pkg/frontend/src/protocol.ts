/**
 * Wire protocol of the session service: JSON text messages over one
 * persistent WebSocket, discriminated by `type`.
 *
 * client -> server:  { type: "input", ...InputPayload }
 * server -> client:  { type: "state", frame: StateFrame }
 *                    { type: "event", event: string, ... }
 *                    { type: "error", reason: string }
 *
 * Angles are radians on the wire; the UI converts for display only.
 */

export type Vec3 = [number, number, number];

export interface GimbalPose {
    pitch: number;
    yaw: number;
}

export interface ScoreInfo {
    index: number;
    distance_m: number;
    score_pct: number;
}

export interface StateFrame {
    tick: number;
    t: number;
    position: Vec3;
    yaw: number;
    roll: number;
    pitch: number;
    vel_cmd: Vec3;
    gimbal: GimbalPose;
    waypoint_index: number;
    waypoint_center: Vec3 | null;
    arrow_world: Vec3;
    arrow_body: Vec3;
    last_score: ScoreInfo | null;
    airspeed: number;
    phase: string;
    paused: boolean;
    crashed_count: number;
    display_delay_ms: number;
    echo_t_client: number;
}

export interface InputPayload {
    t_client: number;
    stick?: { x: number; y: number };
    hands?: { left: number; right: number };
    head: { pitch: number; yaw: number };
    pause: boolean;
}

export type ServerMessage =
    | { type: "state"; frame: StateFrame }
    | { type: "event"; event: string; [key: string]: unknown }
    | { type: "error"; reason: string };

export class ProtocolError extends Error {}

/** Parse one server text message; throws ProtocolError on anything unexpected. */
export function parseServerMessage(raw: string): ServerMessage {
    let msg: unknown;
    try {
        msg = JSON.parse(raw);
    } catch {
        throw new ProtocolError(`not JSON: ${raw.slice(0, 80)}`);
    }
    if (typeof msg !== "object" || msg === null || !("type" in msg)) {
        throw new ProtocolError("message lacks a type discriminator");
    }
    const typed = msg as { type: string };
    if (typed.type === "state") {
        const frame = (msg as { frame?: unknown }).frame;
        if (typeof frame !== "object" || frame === null || !("yaw" in frame)) {
            throw new ProtocolError("state message without a frame");
        }
        return msg as ServerMessage;
    }
    if (typed.type === "event") {
        if (typeof (msg as { event?: unknown }).event !== "string") {
            throw new ProtocolError("event message without an event name");
        }
        return msg as ServerMessage;
    }
    if (typed.type === "error") {
        return msg as ServerMessage;
    }
    throw new ProtocolError(`unknown message type ${typed.type}`);
}

export function encodeInput(payload: InputPayload): string {
    return JSON.stringify({ type: "input", ...payload });
}
