"""Template rendering and the Java entity emitters."""

from .java import (
    can_get,
    can_set,
    code_bean_attribute,
    code_entity_bean,
    entity_beans,
    entity_source,
    generate,
    normalize,
    type_name,
    upper_initial,
)
from .template import (
    ForPart,
    Hole,
    IfPart,
    Literal,
    OutputSink,
    Template,
    compile_template,
    hole_expr,
    render,
)

__all__ = [
    "ForPart", "Hole", "IfPart", "Literal", "OutputSink", "Template", "can_get", "can_set",
    "code_bean_attribute", "code_entity_bean", "compile_template", "entity_beans",
    "entity_source", "generate", "hole_expr", "normalize", "render", "type_name",
    "upper_initial",
]
