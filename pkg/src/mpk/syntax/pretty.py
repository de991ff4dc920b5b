from __future__ import annotations

from ..kernel.store import Store
from ..kernel.values import ids_of


def pretty_print(store: Store, pid: int) -> str:
    """Canonical ``@Package`` text for a package and the classes it contains."""
    s = store
    lines = [f"@Package {s.name(pid)}"]
    lines.append(f"  metaclass {s.name(s.of(pid))}")
    mp = s.meta_package(pid)
    if mp is not None:
        lines.append(f"  metapackage {s.name(mp)}")
    for cid in s.modelling_elements(pid):
        head = f"  @Class {s.name(cid)} metaclass {s.name(s.of(cid))}"
        if s.get_slot(cid, "isabstract"):
            head += " isabstract"
        for p in s.parents(cid):
            head += f" extends {s.name(p)}"
        lines.append(head)
        for aid in ids_of(s.get_slot(cid, "attributes")):
            att = f"    @Attribute {s.name(aid)} metaclass {s.name(s.of(aid))}"
            t = s.attribute_type(aid)
            if t is not None:
                att += f" : {s.name(t)}"
            lines.append(att + " end")
        lines.append("  end")
    lines.append("end")
    return "\n".join(lines) + "\n"
