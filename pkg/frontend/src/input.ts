/**
 * Desk input capture standing in for the motion platform: arrow keys
 * or a gamepad right stick give the stick axes, two on-screen sliders
 * emulate the left/right hand tilt, and mouse drag looks around
 * without turning the drone.  All sources are plain state holders so
 * they can be driven synthetically in tests.
 */

import { InputPayload } from "./protocol.js";

export interface PilotState {
    stickX: number;
    stickY: number;
    handLeftRad: number;
    handRightRad: number;
    headPitchRad: number;
    headYawRad: number;
    pause: boolean;
}

export function neutralPilotState(): PilotState {
    return {
        stickX: 0,
        stickY: 0,
        handLeftRad: 0,
        handRightRad: 0,
        headPitchRad: 0,
        headYawRad: 0,
        pause: false,
    };
}

export type InputMode = "stick" | "hands";

/** Fold the pilot state into the wire payload for the selected mode. */
export function toInputPayload(state: PilotState, mode: InputMode): Omit<InputPayload, "t_client"> {
    const head = { pitch: state.headPitchRad, yaw: state.headYawRad };
    if (mode === "hands") {
        return { hands: { left: state.handLeftRad, right: state.handRightRad }, head, pause: state.pause };
    }
    return { stick: { x: state.stickX, y: state.stickY }, head, pause: state.pause };
}

/** Arrow keys (or WASD) drive the stick; space toggles pause. */
export class KeyboardStick {
    private down = new Set<string>();

    constructor(private state: PilotState) {}

    handleKey(code: string, pressed: boolean): void {
        if (pressed && code === "Space") {
            this.state.pause = !this.state.pause;
        }
        if (pressed) this.down.add(code);
        else this.down.delete(code);
        const axis = (neg: string[], pos: string[]) => {
            const n = neg.some((c) => this.down.has(c)) ? 1 : 0;
            const p = pos.some((c) => this.down.has(c)) ? 1 : 0;
            return p - n;
        };
        this.state.stickX = axis(["ArrowLeft", "KeyA"], ["ArrowRight", "KeyD"]);
        this.state.stickY = axis(["ArrowDown", "KeyS"], ["ArrowUp", "KeyW"]);
    }

    attach(target: { addEventListener(type: string, cb: (ev: KeyboardEvent) => void): void }): void {
        target.addEventListener("keydown", (ev) => this.handleKey(ev.code, true));
        target.addEventListener("keyup", (ev) => this.handleKey(ev.code, false));
    }
}

/** Gamepad right stick, when one is plugged in; falls back silently. */
export class GamepadStick {
    constructor(
        private state: PilotState,
        private deadzone = 0.08,
    ) {}

    poll(pads: Array<{ axes: ReadonlyArray<number> } | null>): boolean {
        const pad = pads.find((p) => p !== null);
        if (!pad || pad.axes.length < 4) return false;
        const strip = (v: number) => (Math.abs(v) <= this.deadzone ? 0 : v);
        // right stick: axes 2/3; screen-up is negative on gamepads
        this.state.stickX = strip(pad.axes[2]);
        this.state.stickY = -strip(pad.axes[3]);
        return true;
    }
}

/** Two sliders in [-1, 1] emulating hand pronation/supination. */
export class SliderHands {
    constructor(
        private state: PilotState,
        private fullScaleRad = (30 * Math.PI) / 180,
    ) {}

    setLeft(norm: number): void {
        this.state.handLeftRad = clamp(norm, -1, 1) * this.fullScaleRad;
    }

    setRight(norm: number): void {
        this.state.handRightRad = clamp(norm, -1, 1) * this.fullScaleRad;
    }
}

/** Mouse drag pans the gimbal: look around without steering. */
export class MouseLook {
    private dragging = false;
    private lastX = 0;
    private lastY = 0;

    constructor(
        private state: PilotState,
        private radPerPixel = 0.004,
        private pitchLimit = Math.PI / 2,
        private yawLimit = Math.PI * 0.75,
    ) {}

    press(x: number, y: number): void {
        this.dragging = true;
        this.lastX = x;
        this.lastY = y;
    }

    move(x: number, y: number): void {
        if (!this.dragging) return;
        this.state.headYawRad = clamp(
            this.state.headYawRad + (x - this.lastX) * this.radPerPixel,
            -this.yawLimit,
            this.yawLimit,
        );
        this.state.headPitchRad = clamp(
            this.state.headPitchRad - (y - this.lastY) * this.radPerPixel,
            -this.pitchLimit,
            this.pitchLimit,
        );
        this.lastX = x;
        this.lastY = y;
    }

    release(): void {
        this.dragging = false;
    }

    recenter(): void {
        this.state.headPitchRad = 0;
        this.state.headYawRad = 0;
    }
}

function clamp(v: number, lo: number, hi: number): number {
    return v < lo ? lo : v > hi ? hi : v;
}
