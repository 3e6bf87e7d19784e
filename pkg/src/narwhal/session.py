"""Exploration sessions: interactive trees for the four execution
modalities, node expansion and folding, transition inspection, unifier
sub-sessions, instrumented views, and the merged graph view.

Everything a client needs crosses this module as plain JSON-friendly
dictionaries, so the HTTP layer and the CLI stay thin.
"""

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .errors import (
    AlreadyExpanded,
    DepthOutOfRange,
    SessionError,
    UnknownEdge,
    UnknownNode,
)
from .axunify import match_mod_ax
from .modlang import parse_module, parse_term, print_term, print_theory
from .narrowing import (
    Bounds,
    NarrowingStep,
    ReachabilityGoal,
    canonical_state_key,
    check_goal,
    re_narrow_children,
)
from .rewrite import RewriteResult, normalize, one_step_rewrites
from .terms import App, FreshVars, Subst, Term, canonicalize, vars_of
from .transform import TT, transform_for_session
from .variants import FVTree, Variant, fv_narrow_step

MODES = ("rewriting", "fv-narrowing", "equational-unification",
         "re-narrowing")

def _is_tt(t: Term) -> bool:
    return isinstance(t, App) and t.op == TT and not t.args


UNEXPANDED = "unexpanded"
EXPANDED = "expanded"
SOLUTION = "solution"


@dataclass
class Node:
    id: int
    term: Term
    depth: int
    parent: Optional[int]
    subst: Subst  # computed narrowing substitution along the path
    status: str = UNEXPANDED
    solution: bool = False
    folded: bool = False
    children: List[int] = field(default_factory=list)
    variant: Optional[Variant] = None  # fv modes
    answer: Optional[Subst] = None
    target_unifier: Optional[Subst] = None

    @property
    def label(self) -> str:
        return f"s{self.id}"


@dataclass
class Edge:
    id: int
    source: int
    target: int
    kind: str  # "narrowing", "rewriting" or "fv"
    step: Any  # NarrowingStep | RewriteResult | (FVEdge, trace)

    @property
    def label(self) -> str:
        return f"e{self.id}"


class ExplorationSession:
    """One exploration tree plus its bookkeeping.  Operations mutate the
    session and return wire-format dictionaries."""

    def __init__(self, session_id: str, module_text: str, mode: str,
                 input_term_text: str,
                 target_term_text: Optional[str] = None,
                 bounds: Bounds = Bounds()):
        if mode not in MODES:
            raise SessionError(f"unknown mode {mode!r}; expected one of "
                               + ", ".join(MODES))
        if target_term_text is not None and mode not in (
                "re-narrowing", "rewriting"):
            raise SessionError(
                "a target term is only valid in re-narrowing or "
                "rewriting mode")
        self.id = session_id
        self.mode = mode
        self.bounds = bounds
        self.original = parse_module(module_text)
        self.theory, self.report = transform_for_session(self.original)
        self.fresh = FreshVars()
        self.nodes: Dict[int, Node] = {}
        self.edges: Dict[int, Edge] = {}
        self.children_sessions: Dict[str, "ExplorationSession"] = {}
        self._node_ids = itertools.count(1)
        self._edge_ids = itertools.count(1)
        self.input_term = parse_term(self.theory, input_term_text)
        self.root_vars = tuple(dict.fromkeys(vars_of(self.input_term)))
        self.goal: Optional[ReachabilityGoal] = None
        if target_term_text is not None:
            self.goal = ReachabilityGoal(
                self.input_term, parse_term(self.theory, target_term_text))
        nf, self.root_trace = normalize(self.theory, self.input_term)
        root = Node(next(self._node_ids), nf, 0, None, Subst({}))
        if mode in ("fv-narrowing", "equational-unification"):
            root.variant = Variant(nf, Subst({}), 0)
        self.nodes[root.id] = root
        self.root = root.id
        self._check_solution(root)

    # -- solution marking -----------------------------------------------------

    def _check_solution(self, node: Node):
        if self.mode in ("equational-unification", "fv-narrowing"):
            # tt leaves are the successful unification branches
            if _is_tt(node.term) and self.mode == "equational-unification":
                node.solution = True
                node.answer = node.subst
            return
        if self.goal is None:
            return
        if self.mode == "rewriting":
            # classical reachability: E-matching of the target over the
            # reached state, no instantiation of the input term
            target = canonicalize(self.theory.signature, self.goal.target)
            ms = match_mod_ax(self.theory.signature, target, node.term,
                              identity_ext=True)
            if ms:
                node.solution = True
                tvars = set(vars_of(self.goal.target))
                node.answer = ms[0].subst.restrict(tvars)
                node.target_unifier = ms[0].subst
            return
        hit = check_goal(self.theory, self.goal, node.term, node.subst,
                         self.fresh, self.bounds)
        if hit is not None:
            gamma, answer, _all = hit
            node.solution = True
            node.answer = answer
            node.target_unifier = gamma

    # -- expansion ------------------------------------------------------------

    def _node(self, node_id: int) -> Node:
        node = self.nodes.get(node_id)
        if node is None:
            raise UnknownNode(f"no node {node_id} in session {self.id}")
        return node

    def _edge(self, edge_id: int) -> Edge:
        edge = self.edges.get(edge_id)
        if edge is None:
            raise UnknownEdge(f"no edge {edge_id} in session {self.id}")
        return edge

    def _add_child(self, parent: Node, term: Term, subst: Subst,
                   kind: str, step, variant=None) -> Tuple[Node, Edge]:
        node = Node(next(self._node_ids), term, parent.depth + 1,
                    parent.id, subst, variant=variant)
        self.nodes[node.id] = node
        edge = Edge(next(self._edge_ids), parent.id, node.id, kind, step)
        self.edges[edge.id] = edge
        parent.children.append(node.id)
        self._check_solution(node)
        return node, edge

    def expand_node(self, node_id: int) -> dict:
        node = self._node(node_id)
        if node.status == EXPANDED:
            raise AlreadyExpanded(f"node {node.label} is already expanded")
        sig = self.theory.signature
        created = []
        if self.mode == "rewriting":
            for r in one_step_rewrites(self.theory, node.term):
                child, edge = self._add_child(
                    node, r.result, Subst({}), "rewriting", r)
                created.append((child, edge))
        elif self.mode in ("fv-narrowing", "equational-unification"):
            for fv_edge, variant, trace in fv_narrow_step(
                    self.theory, node.variant, self.root_vars, self.fresh,
                    self.bounds.assoc_bound):
                child, edge = self._add_child(
                    node, variant.term, variant.subst, "fv",
                    (fv_edge, trace), variant=variant)
                created.append((child, edge))
        else:
            for step in re_narrow_children(self.theory, node.term,
                                           self.fresh, self.bounds):
                subst = node.subst.compose(sig, step.unifier) \
                    .restrict(self.root_vars)
                child, edge = self._add_child(
                    node, step.term, subst, "narrowing", step)
                created.append((child, edge))
        node.status = EXPANDED
        return {
            "node": self.node_wire(node),
            "newNodes": [self.node_wire(n) for n, _ in created],
            "newEdges": [self.edge_wire(e) for _, e in created],
        }

    def expand_subtree(self, node_id: int, depth: Optional[int] = None) -> dict:
        if depth is None:
            depth = 3
        if not 1 <= depth <= 5:
            raise DepthOutOfRange(
                f"expansion depth must be between 1 and 5, got {depth}")
        base = self._node(node_id)
        new_nodes: List[Node] = []
        new_edges: List[Edge] = []
        frontier = [(base.id, 0)]
        while frontier:
            nid, rel = frontier.pop(0)
            if rel >= depth:
                continue
            node = self._node(nid)
            if node.status != EXPANDED:
                before = set(self.nodes)
                result = self.expand_node(nid)
                del result
                for cid in node.children:
                    if cid not in before:
                        new_nodes.append(self.nodes[cid])
                for e in self.edges.values():
                    if e.source == nid and e.target not in before:
                        new_edges.append(e)
            for cid in node.children:
                frontier.append((cid, rel + 1))
        return {
            "root": base.label,
            "depth": depth,
            "newNodes": [self.node_wire(n) for n in new_nodes],
            "newEdges": [self.edge_wire(e) for e in new_edges],
        }

    def fold_node(self, node_id: int) -> dict:
        node = self._node(node_id)
        node.folded = True
        return {"node": node.label, "folded": True}

    def unfold_node(self, node_id: int) -> dict:
        node = self._node(node_id)
        node.folded = False
        return {"node": node.label, "folded": False}

    # -- inspection -----------------------------------------------------------

    def inspect_transition(self, edge_id: int) -> dict:
        edge = self._edge(edge_id)
        th = self.theory
        tgt = self.nodes[edge.target]
        rec = {
            "edge": edge.label,
            "source": self.nodes[edge.source].label,
            "target": tgt.label,
            "kind": edge.kind,
            "term": self._t(tgt.term),
            "rule": None,
            "position": None,
            "ruleSubstitution": None,
            "inputTermSubstitution": None,
            "computedNarrowingSubstitution": None,
            "targetUnifier": None,
            "answer": None,
            "matcher": None,
            "equationLabel": None,
            "incompleteUnifierSet": False,
        }
        if edge.kind == "narrowing":
            step: NarrowingStep = edge.step
            rec.update({
                "rule": {
                    "label": step.rule.label,
                    "lhs": self._t(step.rule.lhs),
                    "rhs": self._t(step.rule.rhs),
                },
                "position": str(step.position),
                "ruleSubstitution": self._s(step.rule_subst),
                "inputTermSubstitution": self._s(step.input_subst),
                "computedNarrowingSubstitution": self._s(tgt.subst),
                "targetUnifier": self._s(tgt.target_unifier)
                if tgt.target_unifier is not None else None,
                "answer": self._s(tgt.answer)
                if tgt.answer is not None else None,
                "incompleteUnifierSet": step.incomplete,
            })
        elif edge.kind == "rewriting":
            r: RewriteResult = edge.step
            rec.update({
                "rule": {
                    "label": r.rule.label,
                    "lhs": self._t(r.rule.lhs),
                    "rhs": self._t(r.rule.rhs),
                },
                "position": str(r.position),
                "matcher": self._s(r.matcher),
                "answer": self._s(tgt.answer)
                if tgt.answer is not None else None,
            })
        else:
            fv_edge, _trace = edge.step
            rec.update({
                "equationLabel": fv_edge.equation_label,
                "position": str(fv_edge.position),
                "ruleSubstitution": self._s(fv_edge.unifier),
                "computedNarrowingSubstitution": self._s(tgt.subst),
            })
        del th
        return rec

    def inspect_unifier(self, edge_id: int) -> dict:
        edge = self._edge(edge_id)
        if edge.kind != "narrowing":
            raise UnknownEdge(
                f"edge {edge.label} is not an (R,E)-narrowing step")
        step: NarrowingStep = edge.step
        child_id = f"{self.id}.u{edge.id}"
        child = object.__new__(ExplorationSession)
        child.id = child_id
        child.mode = "equational-unification"
        child.bounds = self.bounds
        child.original = self.original
        child.theory = self.theory
        child.report = self.report
        child.fresh = self.fresh
        child.nodes = {}
        child.edges = {}
        child.children_sessions = {}
        child._node_ids = itertools.count(1)
        child._edge_ids = itertools.count(1)
        child.goal = None
        tree: FVTree = step.fv_tree
        child.root_vars = tree.root_vars
        child.input_term = tree.nodes[tree.root].variant.term
        child.root_trace = tree.nodes[tree.root].trace
        # mirror the witness FV tree into session nodes
        id_map = {}
        for fid in sorted(tree.nodes):
            fnode = tree.nodes[fid]
            if fnode.parent is None:
                node = Node(next(child._node_ids), fnode.variant.term, 0,
                            None, fnode.variant.subst,
                            variant=fnode.variant)
                child.nodes[node.id] = node
                child.root = node.id
                child._check_solution(node)
            else:
                parent = child.nodes[id_map[fnode.parent]]
                node, _e = child._add_child(
                    parent, fnode.variant.term, fnode.variant.subst, "fv",
                    (fnode.edge, fnode.trace), variant=fnode.variant)
            id_map[fid] = node.id
        for fid, fnode in tree.nodes.items():
            if fnode.children:
                child.nodes[id_map[fid]].status = EXPANDED
            elif fnode.folded_by is not None:
                child.nodes[id_map[fid]].status = "folded"
        # highlight the branch whose composed substitution produced the
        # step's unifier
        pvars = set(step.unifier.domain)
        highlight: List[str] = []
        for fid in sorted(tree.nodes):
            fnode = tree.nodes[fid]
            if fnode.is_success and fnode.folded_by is None and \
                    fnode.variant.subst.restrict(pvars) == \
                    step.unifier.restrict(pvars):
                path = []
                cur = fid
                while cur is not None:
                    path.append(id_map[cur])
                    cur = tree.nodes[cur].parent
                highlight = [f"s{i}" for i in reversed(path)]
                break
        self.children_sessions[child_id] = child
        return {
            "session": child_id,
            "root": child.nodes[child.root].label,
            "highlightedBranch": highlight,
            "unifier": self._s(step.unifier),
            "tree": child.tree_wire(),
        }

    def instrumented_view(self, edge_id: int) -> dict:
        edge = self._edge(edge_id)
        if edge.kind == "narrowing":
            trace = edge.step.trace
        elif edge.kind == "rewriting":
            trace = edge.step.trace
        else:
            trace = edge.step[1]
        return {
            "edge": edge.label,
            "initial": self._t(trace.initial),
            "final": self._t(trace.final),
            "steps": [self._reduction_step_wire(s) for s in trace.steps],
        }

    def graph_view(self) -> dict:
        """Quotient of the visible tree by the canonical state key."""
        sig = self.theory.signature
        hidden = set()
        for node in self.nodes.values():
            if node.folded:
                stack = list(node.children)
                while stack:
                    cid = stack.pop()
                    hidden.add(cid)
                    stack.extend(self.nodes[cid].children)
        groups: Dict[Any, List[Node]] = {}
        order: List[Any] = []
        for nid in sorted(self.nodes):
            if nid in hidden:
                continue
            node = self.nodes[nid]
            key = canonical_state_key(sig, node.term)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(node)
        rep_of = {}
        gnodes = []
        for key in order:
            members = groups[key]
            rep = members[0]
            for m in members:
                rep_of[m.id] = rep.id
            gnodes.append({
                "id": rep.label,
                "term": self._t(rep.term),
                "members": [m.label for m in members],
                "solution": any(m.solution for m in members),
            })
        gedges = []
        for eid in sorted(self.edges):
            e = self.edges[eid]
            if e.source in hidden or e.target in hidden:
                continue
            gedges.append({
                "id": e.label,
                "source": f"s{rep_of[e.source]}",
                "target": f"s{rep_of[e.target]}",
                "kind": e.kind,
            })
        return {"nodes": gnodes, "edges": gedges}

    def show_program(self) -> dict:
        return {
            "original": print_theory(self.original),
            "transformed": print_theory(self.theory),
            "report": {
                "addedOps": list(self.report.added_ops),
                "addedEquations": list(self.report.added_equations),
                "replacedOps": list(self.report.replaced_ops),
                "diagnostics": [
                    {"level": d.level, "code": d.code,
                     "message": d.message, "rule": d.rule_label}
                    for d in self.report.diagnostics
                ],
            },
        }

    # -- wire helpers ---------------------------------------------------------

    def _t(self, t: Term) -> str:
        return print_term(self.theory, t)

    def _s(self, s: Subst) -> dict:
        if s is None:
            return None
        out = {}
        for v, t in sorted(s.mapping.items(), key=lambda kv: kv[0].name):
            out[self._t(v)] = self._t(t)
        return out

    def _reduction_step_wire(self, s) -> dict:
        return {
            "source": self._t(s.source),
            "equation": s.label,
            "position": str(s.position),
            "matcher": self._s(s.matcher),
            "result": self._t(s.result),
        }

    def node_wire(self, node: Node) -> dict:
        out = {
            "id": node.label,
            "term": self._t(node.term),
            "depth": node.depth,
            "status": node.status,
            "solution": node.solution,
            "folded": node.folded,
            "parent": f"s{node.parent}" if node.parent is not None else None,
            "children": [f"s{c}" for c in node.children],
            "substitution": self._s(node.subst),
        }
        if node.answer is not None:
            out["answer"] = self._s(node.answer)
        return out

    def edge_wire(self, edge: Edge) -> dict:
        out = {
            "id": edge.label,
            "source": self.nodes[edge.source].label,
            "target": self.nodes[edge.target].label,
            "kind": edge.kind,
        }
        if edge.kind == "narrowing":
            out["rule"] = edge.step.rule.label
            out["position"] = str(edge.step.position)
            out["incompleteUnifierSet"] = edge.step.incomplete
        elif edge.kind == "rewriting":
            out["rule"] = edge.step.rule.label
            out["position"] = str(edge.step.position)
        else:
            out["equation"] = edge.step[0].equation_label
            out["position"] = str(edge.step[0].position)
        return out

    def tree_wire(self) -> dict:
        return {
            "session": self.id,
            "mode": self.mode,
            "root": self.nodes[self.root].label,
            "nodes": [self.node_wire(self.nodes[i])
                      for i in sorted(self.nodes)],
            "edges": [self.edge_wire(self.edges[i])
                      for i in sorted(self.edges)],
        }

    def summary_wire(self) -> dict:
        return {
            "session": self.id,
            "mode": self.mode,
            "root": self.nodes[self.root].label,
            "rootTerm": self._t(self.nodes[self.root].term),
            "goal": self._t(self.goal.target) if self.goal else None,
            "diagnostics": [
                {"level": d.level, "code": d.code, "message": d.message}
                for d in self.report.diagnostics
            ],
        }


class SessionStore:
    """In-memory registry with deterministic ids and an operation log per
    session, used for snapshot/restore."""

    def __init__(self):
        self._sessions: Dict[str, ExplorationSession] = {}
        self._counter = itertools.count(1)
        self._logs: Dict[str, dict] = {}

    def create(self, module_text: str, mode: str, input_term_text: str,
               target_term_text: Optional[str] = None,
               bounds: Bounds = Bounds()) -> ExplorationSession:
        sid = f"n{next(self._counter)}"
        session = ExplorationSession(sid, module_text, mode,
                                     input_term_text, target_term_text,
                                     bounds)
        self._sessions[sid] = session
        self._logs[sid] = {
            "version": 1,
            "create": {
                "module": module_text,
                "mode": mode,
                "inputTerm": input_term_text,
                "targetTerm": target_term_text,
                "bounds": {
                    "maxDepth": bounds.max_depth,
                    "maxCount": bounds.max_count,
                    "assocBound": bounds.assoc_bound,
                },
            },
            "ops": [],
        }
        return session

    def get(self, sid: str) -> ExplorationSession:
        session = self._sessions.get(sid)
        if session is None and "." in sid:
            parent = self._sessions.get(sid.split(".")[0])
            if parent is not None:
                session = parent.children_sessions.get(sid)
        if session is None:
            raise SessionError(f"unknown session {sid}")
        return session

    def log(self, sid: str, op: str, args: dict):
        root = sid.split(".")[0]
        if root in self._logs:
            self._logs[root]["ops"].append({"op": op, "args": args})

    def snapshot(self, sid: str) -> str:
        root = sid.split(".")[0]
        if root not in self._logs:
            raise SessionError(f"unknown session {sid}")
        return json.dumps(self._logs[root], indent=2)

    def restore(self, text: str) -> ExplorationSession:
        data = json.loads(text)
        if data.get("version") != 1:
            raise SessionError("unsupported snapshot version")
        c = data["create"]
        b = c.get("bounds") or {}
        bounds = Bounds(b.get("maxDepth", 10), b.get("maxCount", 512),
                        b.get("assocBound", 4))
        session = self.create(c["module"], c["mode"], c["inputTerm"],
                              c.get("targetTerm"), bounds)
        for entry in data.get("ops", ()):
            apply_op(self, session.id, entry["op"], entry["args"])
        return session


def _node_id(label) -> int:
    if isinstance(label, int):
        return label
    if isinstance(label, str) and label.startswith("s"):
        label = label[1:]
    try:
        return int(label)
    except (TypeError, ValueError):
        raise UnknownNode(f"bad node id {label!r}")


def _edge_id(label) -> int:
    if isinstance(label, int):
        return label
    if isinstance(label, str) and label.startswith("e"):
        label = label[1:]
    try:
        return int(label)
    except (TypeError, ValueError):
        raise UnknownEdge(f"bad edge id {label!r}")


def apply_op(store: SessionStore, sid: str, op: str, args: dict) -> dict:
    """Dispatch one logged/wire operation against a session."""
    session = store.get(sid)
    if op == "expand-node":
        result = session.expand_node(_node_id(args["node"]))
    elif op == "expand-subtree":
        result = session.expand_subtree(_node_id(args["node"]),
                                        args.get("depth"))
    elif op == "fold-node":
        result = session.fold_node(_node_id(args["node"]))
    elif op == "unfold-node":
        result = session.unfold_node(_node_id(args["node"]))
    elif op == "inspect-transition":
        result = session.inspect_transition(_edge_id(args["edge"]))
    elif op == "inspect-unifier":
        result = session.inspect_unifier(_edge_id(args["edge"]))
    elif op == "instrumented-view":
        result = session.instrumented_view(_edge_id(args["edge"]))
    elif op == "graph-view":
        result = session.graph_view()
    elif op == "show-program":
        result = session.show_program()
    elif op == "tree":
        result = session.tree_wire()
    else:
        raise SessionError(f"unknown operation {op!r}")
    if op in ("expand-node", "expand-subtree", "fold-node", "unfold-node",
              "inspect-unifier"):
        store.log(sid, op, args)
    return result
