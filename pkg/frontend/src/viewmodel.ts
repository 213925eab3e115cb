/**
 * Cockpit view model: everything the HUD renders, derived purely from
 * server messages.  No physics happens here -- the UI displays the
 * server stream and nothing else, so reconnecting mid-session
 * reproduces the identical view.
 *
 * Frames are presented through a short delay queue matching the
 * configured display path latency (the video link of the real rig),
 * and the horizon is low-pass smoothed for display only.
 */

import { ScoreInfo, ServerMessage, StateFrame } from "./protocol.js";

export const STALE_AFTER_MS = 500;
const HORIZON_TAU_MS = 80;
const SCORE_TICKER_LENGTH = 5;

interface QueuedFrame {
    frame: StateFrame;
    receivedAtMs: number;
}

export interface LatencyReadout {
    /** measured client clock round trip through the input echo [ms] */
    inputEchoMs: number | null;
    /** constant display-path delay the server reports [ms] */
    displayDelayMs: number | null;
}

export class CockpitViewModel {
    /** newest frame the server sent (pre display delay) */
    latest: StateFrame | null = null;
    /** frame currently being shown (post display delay) */
    displayed: StateFrame | null = null;

    horizonRollRad = 0;
    horizonPitchRad = 0;

    scoreTicker: ScoreInfo[] = [];
    events: string[] = [];
    crashFlashUntilMs = 0;

    private queue: QueuedFrame[] = [];
    private lastReceivedAtMs: number | null = null;
    private lastPresentMs: number | null = null;
    private lastScoreIndex: number | null = null;

    latency: LatencyReadout = { inputEchoMs: null, displayDelayMs: null };

    /** Feed one parsed server message; nowMs is the client clock. */
    ingest(msg: ServerMessage, nowMs: number): void {
        if (msg.type === "state") {
            this.latest = msg.frame;
            this.lastReceivedAtMs = nowMs;
            this.queue.push({ frame: msg.frame, receivedAtMs: nowMs });
            this.latency.displayDelayMs = msg.frame.display_delay_ms;
            if (msg.frame.echo_t_client > 0) {
                this.latency.inputEchoMs = nowMs - msg.frame.echo_t_client;
            }
            this.trackScore(msg.frame);
        } else if (msg.type === "event") {
            this.events.push(msg.event);
            if (msg.event === "crash") {
                this.crashFlashUntilMs = nowMs + 1000;
            }
        } else {
            this.events.push(`error: ${msg.reason}`);
        }
    }

    private trackScore(frame: StateFrame): void {
        const score = frame.last_score;
        if (score && score.index !== this.lastScoreIndex) {
            this.lastScoreIndex = score.index;
            this.scoreTicker.push(score);
            if (this.scoreTicker.length > SCORE_TICKER_LENGTH) {
                this.scoreTicker.shift();
            }
        }
    }

    /**
     * Advance presentation to the client clock: pop frames whose
     * display delay has elapsed and relax the horizon toward the
     * displayed attitude.  Returns the frame to draw (or null).
     */
    present(nowMs: number): StateFrame | null {
        while (
            this.queue.length > 0 &&
            nowMs - this.queue[0].receivedAtMs >= this.queue[0].frame.display_delay_ms
        ) {
            this.displayed = this.queue.shift()!.frame;
        }
        if (this.displayed) {
            const dtMs = this.lastPresentMs === null ? 16 : nowMs - this.lastPresentMs;
            const alpha = 1 - Math.exp(-Math.max(dtMs, 0) / HORIZON_TAU_MS);
            this.horizonRollRad += (this.displayed.roll - this.horizonRollRad) * alpha;
            this.horizonPitchRad += (this.displayed.pitch - this.horizonPitchRad) * alpha;
        }
        this.lastPresentMs = nowMs;
        return this.displayed;
    }

    /** True when no frame has arrived for the stale threshold ("link lost"). */
    isStale(nowMs: number): boolean {
        return this.lastReceivedAtMs === null || nowMs - this.lastReceivedAtMs > STALE_AFTER_MS;
    }

    /**
     * Bearing of the next-waypoint arrow on screen [rad]: 0 is dead
     * ahead, positive toward the positive-roll turn direction.
     */
    arrowBearingRad(frame: StateFrame): number {
        const [fwd, lat] = frame.arrow_body;
        return Math.atan2(lat, fwd);
    }

    /** The waypoint sits behind the camera: the arrow must reverse. */
    arrowReversed(frame: StateFrame): boolean {
        return frame.arrow_body[0] < 0;
    }

    phaseBanner(frame: StateFrame | null): string {
        if (!frame) return "connecting";
        const pause = frame.paused ? " (paused)" : "";
        return `${frame.phase}${pause}`;
    }
}
