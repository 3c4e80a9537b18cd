"""Live game sessions for human play, plus the JSON wire protocol.

A session wraps one game: the human drives the HP army through group
orders, the machine army runs its fixed controller, and every submitted
order is recorded into the behavior model at submission time.  Views are
fog-filtered per army and only ever show what that army has legitimately
sensed.

Wire protocol (every message carries "v": 1):
  request  {"v":1,"type":"create","map_text":...,"config":{...},"vp_genome":[24],"seed":N}
           {"v":1,"type":"start","session":id}
           {"v":1,"type":"order","session":id,"units":[ids],"action":1..6}
           {"v":1,"type":"view","session":id,"army":"hp"|"vp"}
           {"v":1,"type":"advance","session":id}
           {"v":1,"type":"rounds"}
  push     {"v":1,"type":"turn","turn":N,"events":[...],"view":{...}}
HTTP: POST /rpc with one request object; WS /ws?session=..&army=.. for
turn pushes (the same request objects may also be sent over the socket).
"""

from __future__ import annotations

import asyncio
import secrets
from collections import defaultdict
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .engine import TurnReport, game_outcome, matrix_controller, step_turn
from .modeling import ExtendedAnswerMatrix, record
from .strategy import ACTION_COUNT, Action, AnswerMatrix
from .world import Army, GameState, MapData, WorldConfig, perceive, spawn_game

PROTOCOL_VERSION = 1

LOBBY = "lobby"
PLAYING = "playing"
FINISHED = "finished"


class SessionError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class Session:
    id: str
    game: GameState
    vp_genome: AnswerMatrix
    recorder: ExtendedAnswerMatrix = field(default_factory=ExtendedAnswerMatrix)
    phase: str = LOBBY
    tick_rate: float = 2.0
    pending_orders: list[tuple[tuple[int, ...], Action]] = field(default_factory=list)
    turn_log: list[dict] = field(default_factory=list)


def state_view(game: GameState, army: Army, phase: str = PLAYING) -> dict:
    """Fog-filtered snapshot for one army at a turn boundary.

    Own units always appear; enemy units only while inside some own
    unit's current visual range, and without their orders.  Terrain is
    '?' wherever the army has never looked.
    """
    know = game.knowledge[army]
    terrain = game.terrain
    glyph_rows = terrain.rows()
    rows = []
    for y in range(terrain.height):
        row = []
        for x in range(terrain.width):
            if know.explored[y * terrain.width + x]:
                row.append(glyph_rows[y][x])
            else:
                row.append("?")
        rows.append("".join(row))
    units = []
    for unit in game.units:
        if not unit.alive:
            continue
        if unit.army is army:
            units.append({
                "id": unit.id, "pos": [unit.x, unit.y], "health": unit.health,
                "energy": unit.energy, "order": int(unit.current_order), "mine": True,
            })
        elif game.enemy_visible_to(army, unit):
            units.append({
                "id": unit.id, "pos": [unit.x, unit.y], "health": unit.health,
                "energy": unit.energy, "mine": False,
            })
    outcome = game_outcome(game)
    return {
        "v": PROTOCOL_VERSION,
        "army": army.tag(),
        "turn": game.turn,
        "width": terrain.width,
        "height": terrain.height,
        "terrain": rows,
        "own_flag": list(game.flags[army]),
        "enemy_flag": list(know.enemy_flag_known) if know.enemy_flag_known else None,
        "units": units,
        "phase": phase,
        "outcome": outcome.to_json() if outcome else None,
    }


class SessionManager:
    """All live sessions of one server process.

    Synchronous and single-threaded by contract: callers serialize
    operations per session (the HTTP layer uses one lock per session).
    """

    def __init__(self, on_finished=None):
        self.sessions: dict[str, Session] = {}
        self.on_finished = on_finished  # callback(session) once Finished

    def create_session(
        self,
        map_data: MapData,
        config: WorldConfig,
        vp_genome: AnswerMatrix,
        seed: int,
        tick_rate: float = 2.0,
    ) -> str:
        game = spawn_game(map_data, config, seed)
        sid = secrets.token_hex(16)
        self.sessions[sid] = Session(sid, game, vp_genome, tick_rate=tick_rate)
        return sid

    def _get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise SessionError("UnknownSession", f"no session {session_id!r}")
        return session

    def start(self, session_id: str) -> None:
        session = self._get(session_id)
        if session.phase == FINISHED:
            raise SessionError("SessionClosed", "session already finished")
        session.phase = PLAYING

    def submit_order(self, session_id: str, unit_ids, action: int) -> dict:
        """Queue a group order for the next turn boundary.

        Each accepted unit is recorded into the behavior model with its
        perception as of submission time.
        """
        session = self._get(session_id)
        if session.phase == FINISHED:
            raise SessionError("SessionClosed", "session already finished")
        if session.phase != PLAYING:
            raise SessionError("NotPlaying", "session has not started")
        if not isinstance(action, int) or not 1 <= action <= ACTION_COUNT:
            raise SessionError("BadAction", f"action must be 1..{ACTION_COUNT}, got {action!r}")
        act = Action(action)
        accepted = []
        rejected = []
        game = session.game
        for uid in sorted(set(int(u) for u in unit_ids)):
            unit = game.units[uid] if 0 <= uid < len(game.units) else None
            if unit is None or not unit.alive:
                rejected.append({"id": uid, "reason": "dead"})
            elif unit.army is not Army.HP:
                rejected.append({"id": uid, "reason": "foreign"})
            else:
                record(session.recorder, perceive(game, unit), act)
                accepted.append(uid)
        if accepted:
            session.pending_orders.append((tuple(accepted), act))
        return {
            "v": PROTOCOL_VERSION,
            "type": "ack",
            "effective_turn": game.turn + 1,
            "accepted": accepted,
            "rejected": rejected,
        }

    def get_state_view(self, session_id: str, army: Army) -> dict:
        session = self._get(session_id)
        return state_view(session.game, army, session.phase)

    def advance(self, session_id: str) -> TurnReport:
        """Step exactly one turn, consuming the queued orders."""
        session = self._get(session_id)
        if session.phase == FINISHED:
            raise SessionError("SessionClosed", "session already finished")
        if session.phase != PLAYING:
            raise SessionError("NotPlaying", "session has not started")
        orders = session.pending_orders
        session.pending_orders = []
        report = step_turn(session.game, orders, matrix_controller(session.vp_genome))
        session.turn_log.append(report.to_json())
        if game_outcome(session.game) is not None:
            session.phase = FINISHED
            if self.on_finished is not None:
                self.on_finished(session)
        return report

    def run_to_completion(self, session_id: str, max_steps: int | None = None) -> None:
        """Advance until the game is decided (no pacing; the server loop
        handles tick_rate)."""
        session = self._get(session_id)
        steps = 0
        while session.phase == PLAYING:
            self.advance(session_id)
            steps += 1
            if max_steps is not None and steps >= max_steps:
                break


def build_app(manager: SessionManager | None = None, maps_dir=None, pmea_runner=None):
    """FastAPI app speaking the wire protocol."""
    from .configio import parse_world_config
    from .strategy import rbp_default, validate_matrix
    from .world import load_map

    app = FastAPI(title="gridwar session service")
    manager = manager or SessionManager()
    app.state.manager = manager
    app.state.pmea_runner = pmea_runner
    locks: dict[str, asyncio.Lock] = defaultdict(asyncio.Lock)
    subscribers: dict[str, list[tuple[WebSocket, Army]]] = defaultdict(list)
    loops: dict[str, asyncio.Task] = {}

    def err(code: str, detail: str, status: int = 400) -> JSONResponse:
        return JSONResponse(
            {"v": PROTOCOL_VERSION, "type": "error", "code": code, "detail": detail},
            status_code=status,
        )

    async def push_turn(session_id: str, report: TurnReport) -> None:
        gone = []
        for ws, army in subscribers.get(session_id, []):
            session = manager.sessions[session_id]
            msg = {
                "v": PROTOCOL_VERSION,
                "type": "turn",
                "turn": report.turn,
                "events": report.events,
                "view": state_view(session.game, army, session.phase),
            }
            try:
                await ws.send_json(msg)
            except Exception:
                gone.append((ws, army))
        for item in gone:
            subscribers[session_id].remove(item)

    async def run_loop(session_id: str) -> None:
        session = manager.sessions.get(session_id)
        if session is None:
            return
        period = 1.0 / session.tick_rate if session.tick_rate > 0 else 0.0
        while session.phase == PLAYING:
            async with locks[session_id]:
                if session.phase != PLAYING:
                    break
                report = manager.advance(session_id)
            await push_turn(session_id, report)
            await asyncio.sleep(period)

    async def handle(msg: dict) -> dict:
        if msg.get("v") != PROTOCOL_VERSION:
            raise SessionError("BadVersion", f"expected v={PROTOCOL_VERSION}")
        mtype = msg.get("type")
        if mtype == "create":
            if "map_text" in msg:
                map_data = load_map(msg["map_text"])
            elif maps_dir is not None and "map" in msg:
                map_data = load_map((maps_dir / msg["map"]).read_text())
            else:
                raise SessionError("BadRequest", "create needs map_text or map")
            if isinstance(msg.get("config"), str):
                config = parse_world_config(msg["config"])
            else:
                config = WorldConfig(**msg.get("config", {}))
            genome = msg.get("vp_genome")
            if genome is None:
                matrix = rbp_default()
            else:
                try:
                    matrix = validate_matrix(genome)
                except ValueError as exc:
                    raise SessionError("BadGenome", str(exc)) from exc
            sid = manager.create_session(
                map_data, config, matrix, int(msg.get("seed", 0)),
                tick_rate=float(msg.get("tick_rate", 2.0)))
            return {"v": PROTOCOL_VERSION, "type": "created", "session": sid}
        if mtype == "start":
            sid = msg["session"]
            manager.start(sid)
            if msg.get("run", True) and sid not in loops:
                loops[sid] = asyncio.get_event_loop().create_task(run_loop(sid))
            return {"v": PROTOCOL_VERSION, "type": "started", "session": sid}
        if mtype == "order":
            async with locks[msg["session"]]:
                return manager.submit_order(msg["session"], msg.get("units", []),
                                            msg.get("action"))
        if mtype == "view":
            army = Army.HP if msg.get("army", "hp") == "hp" else Army.VP
            async with locks[msg["session"]]:
                view = manager.get_state_view(msg["session"], army)
            return {"v": PROTOCOL_VERSION, "type": "view", "view": view}
        if mtype == "advance":
            sid = msg["session"]
            async with locks[sid]:
                if manager.sessions.get(sid) and manager.sessions[sid].phase == LOBBY:
                    manager.start(sid)
                report = manager.advance(sid)
            await push_turn(sid, report)
            session = manager.sessions[sid]
            return {
                "v": PROTOCOL_VERSION, "type": "turn", "turn": report.turn,
                "events": report.events,
                "view": state_view(session.game, Army.HP, session.phase),
            }
        if mtype == "rounds":
            runner = app.state.pmea_runner
            rounds = runner.round_history() if runner is not None else []
            return {"v": PROTOCOL_VERSION, "type": "rounds", "rounds": rounds}
        if mtype == "pmea-next":
            runner = app.state.pmea_runner
            if runner is None:
                raise SessionError("NoPmea", "server not running a live loop")
            sid = runner.next_session(manager)
            return {"v": PROTOCOL_VERSION, "type": "created", "session": sid,
                    "round": runner.current_round}
        raise SessionError("BadRequest", f"unknown message type {mtype!r}")

    @app.get("/health")
    async def health():
        return {"v": PROTOCOL_VERSION, "ok": True}

    @app.post("/rpc")
    async def rpc(msg: dict):
        try:
            return await handle(msg)
        except SessionError as exc:
            return err(exc.code, str(exc))
        except (ValueError, KeyError) as exc:
            return err("BadRequest", str(exc))

    @app.websocket("/ws")
    async def ws(websocket: WebSocket):
        await websocket.accept()
        sid = websocket.query_params.get("session")
        army = Army.HP if websocket.query_params.get("army", "hp") == "hp" else Army.VP
        if sid:
            subscribers[sid].append((websocket, army))
        try:
            while True:
                msg = await websocket.receive_json()
                try:
                    reply = await handle(msg)
                except SessionError as exc:
                    reply = {"v": PROTOCOL_VERSION, "type": "error",
                             "code": exc.code, "detail": str(exc)}
                except (ValueError, KeyError) as exc:
                    reply = {"v": PROTOCOL_VERSION, "type": "error",
                             "code": "BadRequest", "detail": str(exc)}
                await websocket.send_json(reply)
        except WebSocketDisconnect:
            pass
        finally:
            if sid:
                subscribers[sid] = [(w, a) for w, a in subscribers[sid] if w is not websocket]

    return app


class PmeaLiveRunner:
    """Bridges live sessions into the between-games adaptation loop.

    Each finished session contributes its recorded model; the controller
    is evolved and persisted exactly like the persona-driven loop, and
    the next session plays against the updated controller.
    """

    def __init__(self, cfg, output_dir=None):
        # cfg: PmeaConfig minus the persona opponent
        from . import artifacts
        from .strategy import rbp_default

        self.cfg = cfg
        self.output_dir = output_dir or cfg.output_dir
        self.vp = rbp_default()
        self.current_round = 0
        self.rounds: list[dict] = []
        self._session_rounds: dict[str, int] = {}
        if self.output_dir is not None:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            artifacts.save_genome(self.output_dir / "vp_initial.json", self.vp)

    def round_history(self) -> list[dict]:
        return list(self.rounds)

    def next_session(self, manager: SessionManager) -> str:
        from .seeds import derive_seed

        if self.current_round >= self.cfg.rounds:
            raise SessionError("Done", "all rounds already played")
        self.current_round += 1
        seed = derive_seed(self.cfg.seed, "round", self.current_round, "game")
        sid = manager.create_session(self.cfg.map_data, self.cfg.world, self.vp, seed)
        self._session_rounds[sid] = self.current_round
        manager.on_finished = self.on_finished
        return sid

    def on_finished(self, session: Session) -> None:
        import dataclasses
        import time

        from . import artifacts
        from .engine import game_outcome
        from .evolution import evolve
        from .modeling import extract_policy
        from .seeds import derive_seed
        from .strategy import rbp_default

        round_no = self._session_rounds.get(session.id)
        if round_no is None:
            return
        started = time.perf_counter()
        model = extract_policy(session.recorder, rbp_default())
        ea = dataclasses.replace(
            self.cfg.ea, seed=derive_seed(self.cfg.seed, self.cfg.ea.seed,
                                          "round", round_no, "ea"))
        self.vp = evolve(model, self.vp, ea, self.cfg.map_data, self.cfg.world).best
        outcome = game_outcome(session.game)
        rec = {"round": round_no, "time_s": time.perf_counter() - started}
        rec.update(outcome.to_json())
        self.rounds.append(rec)
        if self.output_dir is not None:
            d = self.output_dir / f"round_{round_no:03d}"
            d.mkdir(parents=True, exist_ok=True)
            artifacts.save_model(d / "model.json", session.recorder)
            artifacts.save_genome(d / "vp.json", self.vp)
            artifacts.save_jsonl(d / "replay.jsonl", session.turn_log)
            artifacts.save_jsonl(d / "outcome.json", [rec])
