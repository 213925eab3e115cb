import { describe, expect, it } from "vitest";

import { StateFrame } from "../src/protocol.js";
import { CockpitViewModel, STALE_AFTER_MS } from "../src/viewmodel.js";
import { neutralPilotState, KeyboardStick, MouseLook, toInputPayload } from "../src/input.js";
import { projectPoint } from "../src/hud.js";

function frame(overrides: Partial<StateFrame> = {}): StateFrame {
    return {
        tick: 1,
        t: 0.02,
        position: [0, 0, 60],
        yaw: 0,
        roll: 0,
        pitch: 0,
        vel_cmd: [12, 0, 0],
        gimbal: { pitch: 0, yaw: 0 },
        waypoint_index: 0,
        waypoint_center: [40, 0, 60],
        arrow_world: [1, 0, 0],
        arrow_body: [1, 0, 0],
        last_score: null,
        airspeed: 12,
        phase: "training",
        paused: false,
        crashed_count: 0,
        display_delay_ms: 48,
        echo_t_client: 0,
        ...overrides,
    };
}

describe("CockpitViewModel", () => {
    it("applies the display delay before presenting", () => {
        const vm = new CockpitViewModel();
        vm.ingest({ type: "state", frame: frame({ tick: 1 }) }, 1000);
        expect(vm.present(1010)).toBeNull(); // 10 ms elapsed < 48 ms display path
        expect(vm.present(1049)?.tick).toBe(1);
    });

    it("presents frames in order once due", () => {
        const vm = new CockpitViewModel();
        vm.ingest({ type: "state", frame: frame({ tick: 1, yaw: 0.1 }) }, 0);
        vm.ingest({ type: "state", frame: frame({ tick: 2, yaw: 0.2 }) }, 20);
        const shown = vm.present(70); // both due; newest wins
        expect(shown?.tick).toBe(2);
    });

    it("flags a stale link after half a second", () => {
        const vm = new CockpitViewModel();
        expect(vm.isStale(0)).toBe(true);
        vm.ingest({ type: "state", frame: frame() }, 100);
        expect(vm.isStale(100 + STALE_AFTER_MS - 1)).toBe(false);
        expect(vm.isStale(100 + STALE_AFTER_MS + 1)).toBe(true);
    });

    it("points the arrow ahead and reverses it behind", () => {
        const vm = new CockpitViewModel();
        const ahead = frame({ arrow_body: [1, 0, 0] });
        expect(vm.arrowBearingRad(ahead)).toBeCloseTo(0, 10);
        expect(vm.arrowReversed(ahead)).toBe(false);
        const right = frame({ arrow_body: [0, 1, 0] });
        expect(vm.arrowBearingRad(right)).toBeCloseTo(Math.PI / 2, 10);
        const behind = frame({ arrow_body: [-1, 0.01, 0] });
        expect(vm.arrowReversed(behind)).toBe(true);
        expect(Math.abs(vm.arrowBearingRad(behind))).toBeGreaterThan(Math.PI / 2);
    });

    it("smooths the horizon toward the displayed attitude", () => {
        const vm = new CockpitViewModel();
        vm.ingest({ type: "state", frame: frame({ roll: 0.5 }) }, 0);
        vm.present(48);
        let prev = vm.horizonRollRad;
        for (let t = 64; t <= 600; t += 16) {
            vm.present(t);
            expect(vm.horizonRollRad).toBeGreaterThanOrEqual(prev);
            prev = vm.horizonRollRad;
        }
        expect(vm.horizonRollRad).toBeCloseTo(0.5, 2);
    });

    it("keeps a short ticker of distinct waypoint scores", () => {
        const vm = new CockpitViewModel();
        for (let i = 0; i < 8; i++) {
            const score = { index: i, distance_m: 2, score_pct: 95 };
            vm.ingest({ type: "state", frame: frame({ last_score: score }) }, i);
            vm.ingest({ type: "state", frame: frame({ last_score: score }) }, i); // duplicate tick
        }
        expect(vm.scoreTicker.length).toBe(5);
        expect(vm.scoreTicker[4].index).toBe(7);
    });

    it("measures input-echo latency from the client clock", () => {
        const vm = new CockpitViewModel();
        vm.ingest({ type: "state", frame: frame({ echo_t_client: 900 }) }, 1000);
        expect(vm.latency.inputEchoMs).toBe(100);
        expect(vm.latency.displayDelayMs).toBe(48);
    });

    it("raises the crash flash on crash events", () => {
        const vm = new CockpitViewModel();
        vm.ingest({ type: "event", event: "crash", count: 1 }, 500);
        expect(vm.crashFlashUntilMs).toBeGreaterThan(500);
    });
});

describe("input composition", () => {
    it("keyboard arrows drive the stick axes", () => {
        const state = neutralPilotState();
        const kb = new KeyboardStick(state);
        kb.handleKey("ArrowRight", true);
        kb.handleKey("ArrowUp", true);
        expect(state.stickX).toBe(1);
        expect(state.stickY).toBe(1);
        kb.handleKey("ArrowRight", false);
        expect(state.stickX).toBe(0);
        const payload = toInputPayload(state, "stick");
        expect(payload.stick).toEqual({ x: 0, y: 1 });
        expect(payload.hands).toBeUndefined();
    });

    it("hands mode emits both tilt angles", () => {
        const state = neutralPilotState();
        state.handLeftRad = 0.3;
        state.handRightRad = 0.3;
        const payload = toInputPayload(state, "hands");
        expect(payload.hands).toEqual({ left: 0.3, right: 0.3 });
        expect(payload.stick).toBeUndefined();
    });

    it("mouse drag pans the head without touching the stick", () => {
        const state = neutralPilotState();
        const look = new MouseLook(state);
        look.press(100, 100);
        look.move(150, 100); // drag right
        expect(state.headYawRad).toBeGreaterThan(0);
        expect(state.stickX).toBe(0);
        look.release();
        look.move(500, 500);
        expect(state.headYawRad).toBeCloseTo(50 * 0.004, 10);
    });
});

describe("projection", () => {
    const cam = { fovRad: Math.PI / 2, width: 800, height: 600 };

    it("puts a point dead ahead at the screen centre", () => {
        const p = projectPoint(frame(), cam, [50, 0, 60]);
        expect(p).not.toBeNull();
        expect(p!.x).toBeCloseTo(400, 6);
        expect(p!.y).toBeCloseTo(300, 6);
    });

    it("culls points behind the camera", () => {
        expect(projectPoint(frame(), cam, [-50, 0, 60])).toBeNull();
    });

    it("renders the positive-roll turn side on screen right", () => {
        const p = projectPoint(frame(), cam, [50, 10, 60]);
        expect(p!.x).toBeGreaterThan(400);
    });

    it("tracks the gimbal view direction", () => {
        const f = frame({ gimbal: { pitch: 0, yaw: Math.PI / 2 } });
        // looking 90 deg left of travel: a point there lands centre-screen
        const p = projectPoint(f, cam, [0, 50, 60]);
        expect(p).not.toBeNull();
        expect(p!.x).toBeCloseTo(400, 6);
    });
});
