"""HTTP wire API over exploration sessions.

Ten JSON endpoints, one per session operation.  Errors map to stable
error codes so clients can branch without parsing messages.
"""

import os
import threading
from typing import Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import (
    AlreadyExpanded,
    DepthOutOfRange,
    NarwhalError,
    SessionError,
    SyntaxError_,
    UnknownEdge,
    UnknownNode,
)
from .narrowing import Bounds
from .session import SessionStore, apply_op

DEFAULT_PORT = 8080


class CreateSessionRequest(BaseModel):
    module: str
    mode: str
    inputTerm: str
    targetTerm: Optional[str] = None
    maxDepth: int = 10
    maxCount: int = 512
    assocBound: int = 4


class NodeRequest(BaseModel):
    session: str
    node: str


class ExpandSubtreeRequest(BaseModel):
    session: str
    node: str
    depth: Optional[int] = None


class EdgeRequest(BaseModel):
    session: str
    edge: str


class SessionRequest(BaseModel):
    session: str


_ERROR_CODES = (
    (AlreadyExpanded, "already-expanded", 409),
    (DepthOutOfRange, "depth-out-of-range", 400),
    (UnknownNode, "unknown-node", 404),
    (UnknownEdge, "unknown-edge", 404),
    (SyntaxError_, "syntax-error", 400),
    (SessionError, "session-error", 404),
    (NarwhalError, "engine-error", 400),
)


def _error_response(exc: Exception) -> JSONResponse:
    for cls, code, status in _ERROR_CODES:
        if isinstance(exc, cls):
            return JSONResponse(
                status_code=status,
                content={"error": code, "message": str(exc)})
    raise exc


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    app = FastAPI(title="narwhal", version="0.1.0")
    if store is None:
        store = SessionStore()
    app.state.store = store
    lock = threading.Lock()

    @app.exception_handler(NarwhalError)
    def _handle(_request, exc):
        return _error_response(exc)

    @app.post("/api/create-session")
    def create_session(req: CreateSessionRequest):
        with lock:
            bounds = Bounds(req.maxDepth, req.maxCount, req.assocBound)
            session = store.create(req.module, req.mode, req.inputTerm,
                                   req.targetTerm, bounds)
            out = session.summary_wire()
            out["tree"] = session.tree_wire()
            return out

    def _op(op, sid, args):
        with lock:
            return apply_op(store, sid, op, args)

    @app.post("/api/expand-node")
    def expand_node(req: NodeRequest):
        return _op("expand-node", req.session, {"node": req.node})

    @app.post("/api/expand-subtree")
    def expand_subtree(req: ExpandSubtreeRequest):
        return _op("expand-subtree", req.session,
                   {"node": req.node, "depth": req.depth})

    @app.post("/api/fold-node")
    def fold_node(req: NodeRequest):
        return _op("fold-node", req.session, {"node": req.node})

    @app.post("/api/unfold-node")
    def unfold_node(req: NodeRequest):
        return _op("unfold-node", req.session, {"node": req.node})

    @app.post("/api/inspect-transition")
    def inspect_transition(req: EdgeRequest):
        return _op("inspect-transition", req.session, {"edge": req.edge})

    @app.post("/api/inspect-unifier")
    def inspect_unifier(req: EdgeRequest):
        return _op("inspect-unifier", req.session, {"edge": req.edge})

    @app.post("/api/instrumented-view")
    def instrumented_view(req: EdgeRequest):
        return _op("instrumented-view", req.session, {"edge": req.edge})

    @app.post("/api/graph-view")
    def graph_view(req: SessionRequest):
        return _op("graph-view", req.session, {})

    @app.post("/api/show-program")
    def show_program(req: SessionRequest):
        return _op("show-program", req.session, {})

    @app.post("/api/tree")
    def tree(req: SessionRequest):
        return _op("tree", req.session, {})

    return app


app = create_app()


def main(port: Optional[int] = None):
    import uvicorn
    if port is None:
        port = int(os.environ.get("NARWHAL_PORT", DEFAULT_PORT))
    uvicorn.run(app, host="127.0.0.1", port=port)


if __name__ == "__main__":
    main()
