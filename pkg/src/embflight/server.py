"""WebSocket service around a Session: one pilot, any number of viewers.

Messages are JSON texts with a `type` discriminator: client->server
`input`, server->client `state`, `event` and `error`.  The first
connected client is the pilot; later clients receive the stream but
their inputs are ignored.  If the pilot drops, the session auto-pauses
until another client takes the seat.  Outbound frames ride the delayed
feedback link, mirroring the command uplink inside the Session.
"""

from __future__ import annotations

import asyncio
import json
import logging
from dataclasses import dataclass, field

import websockets

from .linksim import Link
from .session import InputFrame, RunConfig, Session

log = logging.getLogger("embflight.server")


@dataclass
class SessionServer:
    config: RunConfig
    host: str = "127.0.0.1"
    port: int = 8765
    session: Session = None  # type: ignore[assignment]
    _clients: set = field(default_factory=set)
    _pilot: object | None = None
    _stop: asyncio.Event = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.session = Session(self.config)
        self.downlink = Link(self.config.profile(), kind="feedback", seed=self.config.seed + 1)

    async def _handle(self, ws) -> None:
        self._clients.add(ws)
        if self._pilot is None:
            self._pilot = ws
            self.session.force_pause = False
        try:
            async for raw in ws:
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict) or "type" not in msg:
                        raise ValueError("message must be an object with a 'type'")
                except (json.JSONDecodeError, ValueError) as e:
                    await ws.send(json.dumps({"type": "error", "reason": str(e)}))
                    continue
                if msg["type"] != "input":
                    await ws.send(
                        json.dumps({"type": "error", "reason": f"unknown type {msg['type']!r}"})
                    )
                    continue
                if self._pilot is None:
                    # seat is empty (pilot left or never claimed): first
                    # client that actually steers takes over and unpauses
                    self._pilot = ws
                    self.session.force_pause = False
                if ws is not self._pilot:
                    continue  # read-only client, input ignored
                try:
                    self.session.submit_input(InputFrame.from_dict(msg))
                except (KeyError, TypeError, ValueError) as e:
                    await ws.send(json.dumps({"type": "error", "reason": f"bad input: {e}"}))
        finally:
            self._clients.discard(ws)
            if ws is self._pilot:
                self._pilot = None
                self.session.force_pause = True  # nobody at the controls

    async def _broadcast(self, text: str) -> None:
        # snapshot: clients may connect/disconnect while sends await
        stale = []
        for ws in list(self._clients):
            try:
                await ws.send(text)
            except websockets.exceptions.ConnectionClosed:
                stale.append(ws)
        for ws in stale:
            self._clients.discard(ws)

    async def _tick_loop(self) -> None:
        dt = self.config.dt
        loop = asyncio.get_running_loop()
        next_deadline = loop.time()
        while not self._stop.is_set():
            result = self.session.tick(None)
            self.downlink.send(result, self.session.link_now)
            for pkt in self.downlink.poll(self.session.link_now):
                due: object = pkt.payload
                await self._broadcast(
                    json.dumps({"type": "state", "frame": due.frame.to_dict()}, sort_keys=True)
                )
                for ev in due.events:
                    await self._broadcast(json.dumps({"type": "event"} | ev, sort_keys=True))
            next_deadline += dt
            delay = next_deadline - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            else:
                next_deadline = loop.time()  # fell behind; don't spiral

    async def run(self) -> None:
        """Serve until cancelled."""
        self._stop = asyncio.Event()
        async with websockets.serve(self._handle, self.host, self.port):
            log.info("serving on ws://%s:%d", self.host, self.port)
            ticker = asyncio.create_task(self._tick_loop())
            ticker.add_done_callback(self._surface_ticker_crash)
            try:
                await self._stop.wait()
            finally:
                ticker.cancel()

    @staticmethod
    def _surface_ticker_crash(task: asyncio.Task) -> None:
        if not task.cancelled() and task.exception() is not None:
            log.error("tick loop died: %r", task.exception())

    def stop(self) -> None:
        if self._stop is not None:
            self._stop.set()


def serve(config: RunConfig, host: str = "127.0.0.1", port: int = 8765) -> None:
    """Blocking entry point for the CLI."""
    server = SessionServer(config, host=host, port=port)
    try:
        asyncio.run(server.run())
    except KeyboardInterrupt:
        pass
