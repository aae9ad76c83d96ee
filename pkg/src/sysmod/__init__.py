"""Executable structural system model: typed values, objects, stores, associations."""

from .associations import (
    AssocDecl,
    AttributeOwned,
    Mediator,
    Ordered,
    Qualified,
    RedundantHybrid,
    binary_rel_of,
    check_assoc_consistency,
    declare_assoc,
    link,
    ordered_binary_rel_of,
    qualified_binary_rel_of,
    rel_of,
)
from .classes import (
    AttrDecl,
    ClassDecl,
    StaticDecl,
    World,
    declare_class,
    declare_static_attr,
    instance_type,
    instantiate,
    sub_class_of,
)
from .constructors import attr_of, deref, mk_rec, proj, rec_from_tuple, tuple_from_rec
from .datastore import (
    EMPTY_STORE,
    Store,
    Violation,
    addobj,
    check_store,
    locations_of,
    oids_of,
    setval_attr,
    setval_loc,
    val_attr,
    val_loc,
    vals_of,
)
from .errors import SysModError
from .universe import (
    BOOLEAN,
    FALSE,
    INT,
    NIL,
    TRUE,
    VOID,
    VOID_V,
    Basic,
    BoolV,
    ClassT,
    IntV,
    ListT,
    ListV,
    Loc,
    LocV,
    NilV,
    Oid,
    OidV,
    Prod,
    Rec,
    RecV,
    Ref,
    SetT,
    SetV,
    TupleV,
    TypedElement,
    TypeName,
    UnknownV,
    Value,
    VoidV,
    canonicalize,
    in_carrier,
    type_of,
    types_equivalent,
)

__version__ = "0.1.0"
