/**
 * Browser bootstrap: connect to the session service, capture desk
 * inputs, and render the HUD at the display rate.  The scene shows the
 * clouds the server has revealed so far; nothing is simulated locally.
 */

import { CockpitClient, SocketLike } from "./client.js";
import {
    GamepadStick,
    InputMode,
    KeyboardStick,
    MouseLook,
    SliderHands,
    neutralPilotState,
    toInputPayload,
} from "./input.js";
import { Vec3 } from "./protocol.js";
import { HudRenderer } from "./hud.js";
import { CockpitViewModel } from "./viewmodel.js";

function param(name: string, fallback: string): string {
    return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

export function start(): void {
    const canvas = document.getElementById("hud") as HTMLCanvasElement;
    const ctx = canvas.getContext("2d")!;
    const cam = { fovRad: (75 * Math.PI) / 180, width: canvas.width, height: canvas.height };

    const url = param("server", "ws://127.0.0.1:8765");
    const mode = param("mode", "stick") as InputMode;

    const vm = new CockpitViewModel();
    const hud = new HudRenderer(ctx, cam);
    const clouds = new Map<number, Vec3>();

    const state = neutralPilotState();
    const keyboard = new KeyboardStick(state);
    keyboard.attach(window as unknown as Parameters<KeyboardStick["attach"]>[0]);
    const gamepad = new GamepadStick(state);
    const look = new MouseLook(state);
    canvas.addEventListener("mousedown", (ev) => look.press(ev.clientX, ev.clientY));
    window.addEventListener("mousemove", (ev) => look.move(ev.clientX, ev.clientY));
    window.addEventListener("mouseup", () => look.release());
    canvas.addEventListener("dblclick", () => look.recenter());

    const hands = new SliderHands(state);
    const leftSlider = document.getElementById("hand-left") as HTMLInputElement | null;
    const rightSlider = document.getElementById("hand-right") as HTMLInputElement | null;
    if (mode === "hands" && leftSlider && rightSlider) {
        document.getElementById("sliders")!.style.display = "block";
        leftSlider.addEventListener("input", () => hands.setLeft(Number(leftSlider.value)));
        rightSlider.addEventListener("input", () => hands.setRight(Number(rightSlider.value)));
    }

    const socket = new WebSocket(url);
    const client = new CockpitClient(socket as unknown as SocketLike);
    client.onMessage((msg) => {
        vm.ingest(msg, performance.now());
        if (msg.type === "state" && msg.frame.waypoint_center) {
            clouds.set(msg.frame.waypoint_index, msg.frame.waypoint_center);
        }
    });
    socket.onopen = () => client.startStreaming(() => {
        gamepad.poll(Array.from(navigator.getGamepads?.() ?? []));
        return toInputPayload(state, mode);
    });

    const frameLoop = () => {
        const now = performance.now();
        const frame = vm.present(now);
        hud.draw(vm, frame, now, [...clouds.values()]);
        requestAnimationFrame(frameLoop);
    };
    requestAnimationFrame(frameLoop);
}

start();
