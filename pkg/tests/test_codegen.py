import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import DATA, by_name
from mpk.codegen import (
    ForPart,
    Literal,
    OutputSink,
    Template,
    can_get,
    can_set,
    compile_template,
    entity_source,
    generate,
    normalize,
    render,
    type_name,
    upper_initial,
)
from mpk.constraints import parse_expr
from mpk.errors import EmptyName, RenderError, UnmappableType
from mpk.kernel import Ref, bootstrap
from mpk.kernel.values import ids_of
from mpk.syntax import parse_bean_container


def single_order():
    store = bootstrap()
    pid = parse_bean_container(store, (DATA / "order_single.mpk").read_text())
    return store, pid, by_name(store, pid, "Order")


def attribute(store, cls, name):
    return store.find(name, ids_of(store.get_slot(cls, "attributes")))


def test_order_matches_the_golden_listing():
    store, _, order = single_order()
    out = entity_source(store, order)
    golden = (DATA / "Order.java").read_text()
    assert normalize(out) == normalize(golden)
    # the only difference is the indentation width
    assert out.replace("    ", "  ").rstrip("\n") == golden.rstrip("\n")


def test_blank_lines_carry_no_indentation():
    store, _, order = single_order()
    out = entity_source(store, order)
    assert all(line.strip() or not line for line in out.split("\n"))


def test_modifiers_select_accessors():
    store, _, order = single_order()
    addr = attribute(store, order, "address")
    assert can_get(store, addr) and can_set(store, addr)
    store.set_slot(addr, "modifiers", frozenset({"?"}))
    assert can_get(store, addr) and not can_set(store, addr)
    out = entity_source(store, order)
    assert "getAddress" in out and "setAddress" not in out
    store.set_slot(addr, "modifiers", frozenset({"!"}))
    out = entity_source(store, order)
    assert "getAddress" not in out and "setAddress" in out
    store.set_slot(addr, "modifiers", frozenset({"?", "!"}))
    out = entity_source(store, order)
    assert "getAddress" in out and "setAddress" in out


def test_type_names(order):
    store, pid = order
    o = by_name(store, pid, "Order")
    assert type_name(store, attribute(store, o, "identifier")) == "int"
    assert type_name(store, attribute(store, o, "address")) == "String"
    assert type_name(store, attribute(store, o, "customer")) == "Customer"
    flag = store.new_instance(store.builtin("BeanAttribute"))
    store.set_slot(flag, "type", Ref(store.builtin("Boolean")))
    assert type_name(store, flag) == "boolean"
    store.set_slot(flag, "type", Ref(store.builtin("Class")))
    with pytest.raises(UnmappableType):
        type_name(store, flag)
    store.set_slot(flag, "type", None)
    with pytest.raises(UnmappableType):
        type_name(store, flag)


def test_upper_initial():
    assert upper_initial("address") == "Address"
    assert upper_initial("x") == "X"
    with pytest.raises(EmptyName):
        upper_initial("")


def test_plain_attributes_are_skipped():
    store, _, order = single_order()
    note = store.new_instance(store.builtin("Attribute"))
    store.set_slot(note, "name", "note")
    store.set_slot(note, "type", Ref(store.builtin("String")))
    store.add_to(order, "attributes", note)
    assert "note" not in entity_source(store, order)


def test_generate_writes_files_and_manifest(order, tmp_path):
    store, pid = order
    manifest = generate(store, [pid], tmp_path)
    assert [m["class"] for m in manifest] == ["NamedElement", "Order", "Customer", "Product"]
    assert json.loads((tmp_path / "manifest.json").read_text()) == manifest
    assert manifest[1] == {"class": "Order", "file": "Order.java", "table": "ORDER_TABLE"}
    assert (tmp_path / "Order.java").read_text().startswith("@Entity\n")


def test_generate_is_all_or_nothing(order, tmp_path):
    store, pid = order
    product = by_name(store, pid, "Product")
    store.set_slot(attribute(store, product, "amount"), "type", Ref(store.builtin("Class")))
    out = tmp_path / "out"
    with pytest.raises(UnmappableType):
        generate(store, [pid], out)
    assert not out.exists()


def test_empty_container_gives_empty_manifest(tmp_path):
    store = bootstrap()
    pid = parse_bean_container(store, "@BeanContainer Nothing end")
    assert generate(store, [pid], tmp_path) == []
    assert json.loads((tmp_path / "manifest.json").read_text()) == []


# -- templates ----------------------------------------------------------------

def test_template_text_form(store):
    t = compile_template("<name> has <(size attributes)> attributes"
                         "<@for a in attributes when (= (nav a name) \"name\") margin 2>\n- <a.name><@end>"
                         "<@if isabstract> abstract<@end> <<done>")
    out = render(store, t, {}, Ref(store.builtin("Class"))).text()
    assert out == "Class has 5 attributes\n  - name <done>"


def test_template_errors(store):
    with pytest.raises(RenderError):
        compile_template("<@for a in attributes>unclosed")
    with pytest.raises(RenderError):
        compile_template("stray <@end>")
    with pytest.raises(RenderError):
        compile_template("<name")
    t = compile_template("line\n  <colour>")
    with pytest.raises(RenderError) as info:
        render(store, t, {}, Ref(store.builtin("Class")))
    assert "2:3" in str(info.value)
    with pytest.raises(RenderError):
        render(store, compile_template("<parents>"), {}, Ref(store.builtin("Class")))
    with pytest.raises(ValueError):
        Template((), -1)


lines = st.lists(st.text(alphabet="ab {}", max_size=6), min_size=1, max_size=5).map("\n".join)


@given(lines, st.integers(0, 8), st.integers(0, 8))
def test_margin_law(body, outer, inner):
    """Text after a newline is indented by the sum of enclosing margins; blank lines stay blank."""
    store = bootstrap()
    nested = Template((ForPart("x", parse_expr("(seq 1)"), Template((Literal(body),), inner)),),
                      outer)
    out = render(store, nested, {}, None).text()
    first, *rest = body.split("\n")
    expected = [first] + [(" " * (outer + inner) + ln) if ln else "" for ln in rest]
    assert out == "\n".join(expected)


def test_sink_margins_stack():
    sink = OutputSink()
    sink.push(2)
    sink.push(3)
    sink.write("a\nb")
    sink.pop()
    sink.write("\nc")
    assert sink.text() == "a\n     b\n  c"
