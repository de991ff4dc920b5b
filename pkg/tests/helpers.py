import os
from pathlib import Path

DATA = Path(__file__).parent / "data"

# bumped by the purity guard in conftest for every evaluation in the suite
PURITY = {"checked": 0}


def mpk_seed(default: int = 20240501) -> int:
    return int(os.environ.get("MPK_SEED", default))


def by_name(store, pid, name):
    for c in store.classes(pid):
        if store.name(c) == name:
            return c
    raise KeyError(name)


def store_graph(store, pid):
    """Labelled multigraph of everything reachable from a package through slots.

    Bootstrap elements become fixed landmarks labelled by name; user elements
    are labelled by their class and scalar slots only, so two stores built in
    different orders compare equal exactly when they have the same shape.
    """
    import networkx as nx
    from mpk.kernel.values import Ref, is_collection, sort_key

    g = nx.MultiDiGraph()
    todo, seen = [pid], set()

    def node(eid):
        if eid < store.first_user_id:
            return ("builtin", store.name(eid) or str(eid))
        return eid

    while todo:
        eid = todo.pop()
        if eid in seen:
            continue
        seen.add(eid)
        if eid < store.first_user_id:
            g.add_node(node(eid), label=node(eid))
            continue
        el = store.element(eid)
        scalars = tuple(sorted((k, sort_key(v)) for k, v in el.slots.items()
                               if not isinstance(v, Ref) and not is_collection(v)))
        g.add_node(eid, label=("user", scalars))
        targets = [("of", Ref(el.of))]
        for k, v in sorted(el.slots.items()):
            if isinstance(v, Ref):
                targets.append((k, v))
            elif is_collection(v):
                targets.extend((k, x) for x in v if isinstance(x, Ref))
        for k, r in targets:
            todo.append(r.id)
            if r.id < store.first_user_id:
                g.add_node(node(r.id), label=node(r.id))
            g.add_edge(eid, node(r.id), label=k)
    return g


def isomorphic(g1, g2) -> bool:
    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_multiedge_match

    return nx.is_isomorphic(
        g1, g2,
        node_match=lambda a, b: a["label"] == b["label"],
        edge_match=categorical_multiedge_match("label", None),
    )
