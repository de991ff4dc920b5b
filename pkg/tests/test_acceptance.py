"""End-to-end acceptance criteria, one test each, each printing a PASS/FAIL line."""

import contextlib
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import DATA, PURITY, by_name, isomorphic, mpk_seed, store_graph
from mpk.codegen import entity_source, normalize
from mpk.constraints import check_container
from mpk.kernel import Ref, bootstrap
from mpk.kernel.values import ids_of
from mpk.selfcheck import selfcheck
from mpk.syntax import parse, parse_bean_container, default_registry
from mpk.toolmodel import one_to_one_violations, open_tool, random_run, sync_check
from test_constraints import de_morgan_holds, exists_matches_brute_force
from test_syntax import package_plus_slots
from test_toolmodel import MAPPING_CONSTRAINTS, brute_force, corruptions, rich_tool


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def report(number, title):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\nFAIL  {number}. {title}")
            raise
        with capsys.disabled():
            print(f"\nPASS  {number}. {title}")
    return report


def test_1_bootstrap_describes_itself(criterion):
    with criterion(1, "bootstrap self-description"):
        findings = selfcheck()
        assert all(f.passed for f in findings), [f for f in findings if not f.passed]
        names = {f.name for f in findings}
        assert {"ClassFixpoint", "OfChains", "BeansInheritsXCore", "Constraints"} <= names

        s = bootstrap()
        colour = s.new_instance(s.builtin("Enum"))
        s.add_to(colour, "elements", s.new_instance(colour))
        assert all(f.passed for f in selfcheck(s))
        s.add_to(colour, "elements", s.builtin("String"))
        failed = {f.name: f.detail for f in selfcheck(s) if not f.passed}
        assert list(failed) == ["Constraints"] and "EnumMembers" in failed["Constraints"]


def test_2_bean_container_report(criterion, order):
    with criterion(2, "constraint report for the bean container"):
        store, pid = order
        report = check_container(store, pid)
        missing = "Must specify a persistent name."
        expected = {
            "Order": {"HasName": (True, None), "OneId": (True, None)},
            "Customer": {"HasName": (False, missing), "OneId": (True, None)},
            "Product": {"HasName": (False, missing), "OneId": (True, None)},
            "NamedElement": {"HasName": (False, missing), "OneId": (True, None)},
        }
        assert sorted(c.name for c in report.children) == sorted(expected)
        for child in report.children:
            got = {c.name: (c.passed, c.message) for c in child.constraints
                   if c.name in ("HasName", "OneId")}
            assert got == expected[child.name], child.name
            # anything else reported is a core rule, and it holds
            assert all(c.passed for c in child.constraints if c.name not in expected[child.name])
        assert not report.passed
        text = report.to_text()
        assert text.count(f"✗ HasName: {missing}") == 3 and text.count("✓ OneId") == 4


def test_3_golden_codegen(criterion):
    with criterion(3, "generated Order class matches the listing"):
        store = bootstrap()
        pid = parse_bean_container(store, (DATA / "order_single.mpk").read_text())
        order = by_name(store, pid, "Order")
        ident = store.find("id", ids_of(store.get_slot(order, "attributes")))
        assert store.get_slot(ident, "isId") is True
        assert store.attribute_type(ident) == store.builtin("Integer")
        out = entity_source(store, order)
        assert normalize(out) == normalize((DATA / "Order.java").read_text())


def test_4_bean_syntax_desugars_to_a_package(criterion, order):
    with criterion(4, "bean text is isomorphic to package text plus slots"):
        store, pid = order
        ref_store, ref_pid = package_plus_slots()
        g1, g2 = store_graph(store, pid), store_graph(ref_store, ref_pid)
        users = [n for n, d in g1.nodes(data=True) if d["label"][0] == "user"]
        assert 0 < len(users) <= 50
        assert isomorphic(g1, g2)


def test_5_palette(criterion, order):
    with criterion(5, "palette derivation"):
        store, pid = order
        tool = open_tool(store, pid)
        groups = {g.name: [b.name for b in g.buttons] for g in tool.palette}
        assert set(groups) == {"XCore", "Beans"}
        beans = store.builtin("Beans")
        assert groups["Beans"] == [store.name(e) for e in store.palette_elements(beans)]
        store.set_slot(pid, "metaPackage", Ref(store.builtin("XCore")))
        assert [g.name for g in tool.palette] == ["XCore"]


def test_6_synchronization(criterion):
    with criterion(6, "diagram and model stay synchronized"):
        rng = random.Random(mpk_seed())
        for run in range(1000):
            store = bootstrap()
            if run % 2:
                pid = parse_bean_container(store, "@BeanContainer Shop end")
            else:
                pid = parse_bean_container(store, (DATA / "order_beans.mpk").read_text())
            tool = open_tool(store, pid)

            def check(i, ev, tool=tool, run=run):
                assert sync_check(tool) == [], (run, i, ev)

            random_run(tool, rng, rng.randint(1, 50), check)

        for name, corrupt in corruptions(rich_tool()):
            tool = rich_tool()
            corrupt(tool)
            assert {v.constraint for v in sync_check(tool)} & MAPPING_CONSTRAINTS, name

        @settings(max_examples=500, database=None)
        @given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=10))
        def one_to_one(maplets):
            doms, rngs = one_to_one_violations(maplets)
            assert (set(doms), set(rngs)) == brute_force(maplets)

        one_to_one()


def test_7_constraint_engine_oracles(criterion):
    with criterion(7, "constraint engine oracles"):
        store = bootstrap()
        rng = random.Random(mpk_seed())
        for _ in range(300):
            xs = [rng.randint(-3, 3) for _ in range(rng.randint(0, 5))]
            assert exists_matches_brute_force(store, xs, rng.randint(1, 3), rng.randint(-6, 6)), xs
        assert all(de_morgan_holds(store, rng) for _ in range(200))
        # the purity guard in conftest watched every evaluation above
        assert PURITY["checked"] > 0


def test_8_tags(criterion, order, package_text):
    with criterion(8, "meta-tags across the parsed model"):
        store, pid = order
        b = store.builtin
        expected = {
            "OrderProcessing": (b("Package"), "BeanContainer"),
            "NamedElement": (b("Class"), "EntityBean"),
            "Order": (b("Class"), "EntityBean"),
            "Customer": (b("Class"), "EntityBean"),
            "Product": (b("Class"), "EntityBean"),
            "NamedElement.name": (b("Attribute"), "BeanAttribute"),
            "Order.identifier": (b("Attribute"), "BeanAttribute"),
            "Order.address": (b("Attribute"), "BeanAttribute"),
            "Order.customer": (b("Attribute"), "BeanAttribute"),
            "Order.product": (b("Attribute"), "BeanAttribute"),
            "Product.amount": (b("Attribute"), "BeanAttribute"),
        }
        seen = {"OrderProcessing": pid}
        for c in store.classes(pid):
            seen[store.name(c)] = c
            for a in ids_of(store.get_slot(c, "attributes")):
                seen[f"{store.name(c)}.{store.name(a)}"] = a
        assert set(seen) == set(expected)
        for key, eid in seen.items():
            base, tag = expected[key]
            assert store.tag(eid, base) == tag, key
            assert store.tag(eid, store.of(eid)) == ""

        # the plain package listing has direct instances, which carry no tag
        plain = bootstrap()
        ppid = parse(plain, default_registry(), package_text)
        ne = by_name(plain, ppid, "NamedElement")
        assert plain.tag(ne, plain.builtin("Class")) == ""
        name_att, = ids_of(plain.get_slot(ne, "attributes"))
        assert plain.tag(name_att, plain.builtin("Attribute")) == ""
        assert plain.tag(by_name(plain, ppid, "Order"), plain.builtin("Class")) == "EntityBean"

        # the tool shows the same tags
        tool = open_tool(store, pid)
        for x in tool.mapping.class_boxes:
            cb = tool.diagram.class_box(x.class_box)
            assert cb.name_box.tag.text == store.tag(x.cls, b("Class"))
            assert {box.tag.text for box in cb.att_boxes} <= {"BeanAttribute"}
