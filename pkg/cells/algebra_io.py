"""代数文件：单个 JSON 文档，字段 kind / elements / mul / add / inv / generators"""
import json
import logging
import os
from typing import Any, Dict

from cells.algebra import KINDS, FiniteAlgebra, make_algebra
from cells.errors import KindMismatchError

logger = logging.getLogger(__name__)


def to_document(A: FiniteAlgebra) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "kind": A.kind,
        "elements": list(A.labels),
        "mul": A.mul.tolist(),
    }
    if A.add is not None:
        doc["add"] = A.add.tolist()
    if A.inv is not None:
        doc["inv"] = A.inv.tolist()
    doc["generators"] = list(A.generators)
    return doc


def from_document(doc: Dict[str, Any]) -> FiniteAlgebra:
    kind = doc.get("kind")
    if kind not in KINDS:
        raise KindMismatchError(f"unknown algebra kind {kind!r}")
    for key in ("elements", "mul"):
        if key not in doc:
            raise KindMismatchError(f"algebra document lacks {key!r}")
    if kind == "ai-semiring" and "add" not in doc:
        raise KindMismatchError("ai-semiring document lacks 'add'")
    if kind == "inverse" and "inv" not in doc:
        raise KindMismatchError("inverse document lacks 'inv'")
    return make_algebra(kind, doc["elements"], doc["mul"], doc.get("add"), doc.get("inv"),
                        doc.get("generators", []))


def dumps_algebra(A: FiniteAlgebra) -> str:
    # 每行一个表行，便于 diff
    doc = to_document(A)
    lines = ["{"]
    keys = list(doc)
    for pos, key in enumerate(keys):
        value = doc[key]
        tail = "," if pos < len(keys) - 1 else ""
        if key in ("mul", "add") and value:
            rows = ",\n    ".join(json.dumps(row) for row in value)
            lines.append(f'  "{key}": [\n    {rows}\n  ]{tail}')
        else:
            lines.append(f'  "{key}": {json.dumps(value, ensure_ascii=False)}{tail}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_algebra(text: str) -> FiniteAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise KindMismatchError(f"algebra file is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise KindMismatchError("algebra file must hold a JSON object")
    return from_document(doc)


def save_algebra(A: FiniteAlgebra, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_algebra(A))
    logger.info(f"代数已保存: {path} ({A.kind}, {A.size} 个元素)")


def load_algebra(path: str) -> FiniteAlgebra:
    if not os.path.exists(path):
        logger.error(f"文件不存在: {path}")
        raise FileNotFoundError(f"代数文件不存在: {path}")
    with open(path, "r", encoding="utf-8") as f:
        algebra = loads_algebra(f.read())
    logger.info(f"代数文件 {path} 加载成功")
    return algebra
