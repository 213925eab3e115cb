/**
 * First-person HUD on a 2D canvas: sky/ground split banked with the
 * displayed attitude, waypoint clouds as projected billboards along
 * the gimbal view, the next-waypoint arrow at the bottom, and text
 * readouts for airspeed, score, phase and latency.
 */

import { StateFrame, Vec3 } from "./protocol.js";
import { CockpitViewModel } from "./viewmodel.js";

export interface Camera {
    fovRad: number;
    width: number;
    height: number;
}

export interface Projected {
    x: number;
    y: number;
    depth: number;
    sizePx: number;
}

const CLOUD_RADIUS_M = 6;

/**
 * Project a world point into camera pixels.  The camera sits at the
 * drone, yawed with the vehicle plus gimbal yaw, pitched with the
 * gimbal; roll is shown by the horizon, not the camera.
 */
export function projectPoint(frame: StateFrame, cam: Camera, world: Vec3): Projected | null {
    const [px, py, pz] = frame.position;
    const yaw = frame.yaw + frame.gimbal.yaw;
    const pitch = frame.gimbal.pitch;
    const dx = world[0] - px;
    const dy = world[1] - py;
    const dz = world[2] - pz;
    // into yaw frame
    const fwd0 = Math.cos(-yaw) * dx - Math.sin(-yaw) * dy;
    const lat = Math.sin(-yaw) * dx + Math.cos(-yaw) * dy;
    // into pitch frame
    const fwd = Math.cos(-pitch) * fwd0 - Math.sin(-pitch) * dz;
    const up = Math.sin(-pitch) * fwd0 + Math.cos(-pitch) * dz;
    if (fwd <= 0.5) return null; // behind the camera
    const focal = cam.width / 2 / Math.tan(cam.fovRad / 2);
    // screen x grows toward the positive lateral axis (the side a
    // positive roll turns toward), so stick-right pans the view right
    return {
        x: cam.width / 2 + (lat / fwd) * focal,
        y: cam.height / 2 - (up / fwd) * focal,
        depth: fwd,
        sizePx: (CLOUD_RADIUS_M / fwd) * focal,
    };
}

type Ctx2D = CanvasRenderingContext2D;

export class HudRenderer {
    constructor(
        private ctx: Ctx2D,
        private cam: Camera,
    ) {}

    draw(vm: CockpitViewModel, frame: StateFrame | null, nowMs: number, clouds: Vec3[]): void {
        const { ctx, cam } = this;
        ctx.clearRect(0, 0, cam.width, cam.height);
        if (!frame) {
            this.centerText("connecting to session service...", "#ccc");
            return;
        }
        this.drawHorizon(vm);
        this.drawClouds(frame, clouds);
        this.drawArrow(vm, frame);
        this.drawReadouts(vm, frame, nowMs);
        if (vm.isStale(nowMs)) {
            this.overlay("LINK LOST", "rgba(120,0,0,0.55)");
        } else if (frame.paused) {
            this.overlay("PAUSED", "rgba(0,0,60,0.35)");
        }
        if (nowMs < vm.crashFlashUntilMs) {
            this.overlay(`CRASH #${frame.crashed_count}`, "rgba(160,30,0,0.45)");
        }
    }

    private drawHorizon(vm: CockpitViewModel): void {
        const { ctx, cam } = this;
        const focal = cam.width / 2 / Math.tan(this.cam.fovRad / 2);
        // platform tilt analog: the horizon banks opposite the vehicle roll
        const offset = Math.tan(vm.horizonPitchRad) * focal;
        ctx.save();
        ctx.translate(cam.width / 2, cam.height / 2 + offset);
        ctx.rotate(-vm.horizonRollRad);
        ctx.fillStyle = "#6ca6d9";
        ctx.fillRect(-cam.width * 1.5, -cam.height * 2, cam.width * 3, cam.height * 2);
        ctx.fillStyle = "#8a6f4b";
        ctx.fillRect(-cam.width * 1.5, 0, cam.width * 3, cam.height * 2);
        ctx.strokeStyle = "#fff";
        ctx.lineWidth = 2;
        ctx.beginPath();
        ctx.moveTo(-cam.width * 1.5, 0);
        ctx.lineTo(cam.width * 1.5, 0);
        ctx.stroke();
        ctx.restore();
    }

    private drawClouds(frame: StateFrame, clouds: Vec3[]): void {
        const { ctx } = this;
        const projected = clouds
            .map((c) => projectPoint(frame, this.cam, c))
            .filter((p): p is Projected => p !== null)
            .sort((a, b) => b.depth - a.depth);
        for (const p of projected) {
            ctx.beginPath();
            ctx.fillStyle = "rgba(255,255,255,0.85)";
            ctx.arc(p.x, p.y, Math.max(2, p.sizePx), 0, 2 * Math.PI);
            ctx.fill();
        }
        // highlight the pending one
        if (frame.waypoint_center) {
            const p = projectPoint(frame, this.cam, frame.waypoint_center);
            if (p) {
                ctx.beginPath();
                ctx.strokeStyle = "#ffd24d";
                ctx.lineWidth = 2;
                ctx.arc(p.x, p.y, Math.max(4, p.sizePx + 4), 0, 2 * Math.PI);
                ctx.stroke();
            }
        }
    }

    private drawArrow(vm: CockpitViewModel, frame: StateFrame): void {
        const { ctx, cam } = this;
        const bearing = vm.arrowBearingRad(frame);
        ctx.save();
        ctx.translate(cam.width / 2, cam.height - 60);
        // screen angle: ahead points up, positive bearing swings toward the turn side
        ctx.rotate(bearing);
        ctx.fillStyle = vm.arrowReversed(frame) ? "#ff8855" : "#7dff7d";
        ctx.beginPath();
        ctx.moveTo(0, -26);
        ctx.lineTo(14, 12);
        ctx.lineTo(0, 4);
        ctx.lineTo(-14, 12);
        ctx.closePath();
        ctx.fill();
        ctx.restore();
    }

    private drawReadouts(vm: CockpitViewModel, frame: StateFrame, nowMs: number): void {
        const { ctx, cam } = this;
        ctx.fillStyle = "#eaeaea";
        ctx.font = "14px monospace";
        const deg = (r: number) => ((r * 180) / Math.PI).toFixed(1);
        const lines = [
            `phase ${vm.phaseBanner(frame)}   t ${frame.t.toFixed(1)} s`,
            `airspeed ${frame.airspeed.toFixed(1)} m/s (fan)`,
            `roll ${deg(frame.roll)}  pitch ${deg(frame.pitch)} (platform tilt)`,
            `alt ${frame.position[2].toFixed(1)} m   crashes ${frame.crashed_count}`,
            `waypoint #${frame.waypoint_index}` +
                (frame.last_score
                    ? `   last ${frame.last_score.score_pct.toFixed(1)}% @ ${frame.last_score.distance_m.toFixed(1)} m`
                    : ""),
            `echo rtt ${vm.latency.inputEchoMs === null ? "--" : vm.latency.inputEchoMs.toFixed(0)} ms` +
                `   display +${vm.latency.displayDelayMs ?? "--"} ms`,
        ];
        lines.forEach((line, i) => ctx.fillText(line, 12, 22 + 18 * i));
        void nowMs;
        void cam;
    }

    private overlay(text: string, fill: string): void {
        const { ctx, cam } = this;
        ctx.fillStyle = fill;
        ctx.fillRect(0, 0, cam.width, cam.height);
        this.centerText(text, "#fff");
    }

    private centerText(text: string, color: string): void {
        const { ctx, cam } = this;
        ctx.fillStyle = color;
        ctx.font = "bold 28px monospace";
        ctx.textAlign = "center";
        ctx.fillText(text, cam.width / 2, cam.height / 2);
        ctx.textAlign = "left";
    }
}
