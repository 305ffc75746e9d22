"""
项（term）：Var / Mul / Add / Inv 组成的表达式树，以及文法解析、求值和词（word）。

文法：变量 [a-z][a-z0-9]*，运算 + * ^-1 ^<k>，括号，乘法可以并置；恒等式为 <项> = <项>。
"""
import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from cells.errors import SignatureError, TermSyntaxError, UnboundVariableError, WorkbenchError

logger = logging.getLogger(__name__)

PLUS_TIMES = "plus-times"
TIMES_INVERSE = "times-inverse"
TIMES_ONLY = "times-only"
SIGNATURES = (PLUS_TIMES, TIMES_INVERSE, TIMES_ONLY)

_TOKEN = re.compile(r"(?P<ident>[a-z][a-z0-9]*)(?P<prime>')?|(?P<number>-?\d+)|(?P<op>[-+*^()=])")
_MACRO = re.compile(r"v(\d+)")
_VAR_PARTS = re.compile(r"([a-z]*)(\d*)(.*)")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Inv:
    child: "Term"


Term = Union[Var, Mul, Add, Inv]
Word = Tuple[str, ...]


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    signature: str

    def variables(self) -> List[str]:
        return sorted(alphabet(self.lhs) | alphabet(self.rhs), key=var_key)

    def __str__(self) -> str:
        return f"{render(self.lhs)} = {render(self.rhs)}"


def var_key(name: str):
    """自然序：x2 < x10"""
    head, digits, rest = _VAR_PARTS.fullmatch(name).groups()
    return head, int(digits) if digits else -1, rest


def alphabet(t: Term) -> Set[str]:
    names = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        elif isinstance(node, Inv):
            stack.append(node.child)
        else:
            stack.extend((node.left, node.right))
    return names


def _contains(t: Term, kind) -> bool:
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, kind):
            return True
        if isinstance(node, Inv):
            stack.append(node.child)
        elif not isinstance(node, Var):
            stack.extend((node.left, node.right))
    return False


def signature_of(t: Term) -> str:
    has_add, has_inv = _contains(t, Add), _contains(t, Inv)
    if has_add and has_inv:
        raise SignatureError("a term cannot mix + and ^-1")
    if has_add:
        return PLUS_TIMES
    if has_inv:
        return TIMES_INVERSE
    return TIMES_ONLY


def check_signature(t: Term, signature: str):
    if signature not in SIGNATURES:
        raise SignatureError(f"unknown signature {signature!r}")
    if signature != PLUS_TIMES and _contains(t, Add):
        raise SignatureError(f"+ is not available in the {signature} signature")
    if signature != TIMES_INVERSE and _contains(t, Inv):
        raise SignatureError(f"^-1 is not available in the {signature} signature")


def power(t: Term, k: int) -> Term:
    """t^k，左结合展开"""
    result = t
    for _ in range(k - 1):
        result = Mul(result, t)
    return result


def word_term(word: Sequence[str]) -> Term:
    if not word:
        raise WorkbenchError("a word must be nonempty")
    result: Term = Var(word[0])
    for name in word[1:]:
        result = Mul(result, Var(name))
    return result


def to_word(t: Term) -> Word:
    letters: List[str] = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            letters.append(node.name)
        elif isinstance(node, Mul):
            stack.append(node.right)
            stack.append(node.left)
        else:
            raise SignatureError("only products of variables flatten to words")
    return tuple(letters)


def vn_pair(n: int) -> Tuple[Word, Word]:
    """
    v_n = U V Ū V U，v_n′ = (U V Ū V)² U，其中 U = x1…xn，V = x(n+1)…x(2n)，Ū 为 U 的逆序
    """
    if n < 2:
        raise WorkbenchError(f"v_n needs n ≥ 2, got {n}")
    U = tuple(f"x{i}" for i in range(1, n + 1))
    V = tuple(f"x{i}" for i in range(n + 1, 2 * n + 1))
    block = U + V + U[::-1] + V
    return block + U, block + block + U


def render(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Inv):
        inner = render(t.child)
        return f"{inner}^-1" if isinstance(t.child, Var) else f"({inner})^-1"
    left, right = render(t.left), render(t.right)
    if isinstance(t, Add):
        if isinstance(t.right, Add):
            right = f"({right})"
        return f"{left} + {right}"
    if isinstance(t.left, Add):
        left = f"({left})"
    if isinstance(t.right, (Add, Mul)):
        right = f"({right})"
    return f"{left}*{right}"


class _Parser:
    def __init__(self, text: str, macros: bool):
        self.text = text
        self.macros = macros
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            match = _TOKEN.match(text, i)
            if not match:
                raise TermSyntaxError(f"unexpected character {text[i]!r}", i)
            if match.group("ident"):
                tokens.append(("ident", match.group(0), i))
            elif match.group("number"):
                tokens.append(("number", match.group(0), i))
            else:
                tokens.append(("op", match.group(0), i))
            i = match.end()
        tokens.append(("end", "", len(text)))
        return tokens

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str):
        kind, value, position = self.advance()
        if value != text or kind == "end":
            raise TermSyntaxError(f"expected {text!r}", position)

    def expect_end(self):
        kind, value, position = self.peek()
        if kind != "end":
            raise TermSyntaxError(f"unexpected {value!r}", position)

    def sum(self) -> Term:
        node = self.product()
        while self.peek()[1] == "+":
            self.advance()
            node = Add(node, self.product())
        return node

    def product(self) -> Term:
        node = self.factor()
        while True:
            kind, value, _ = self.peek()
            if value == "*" and kind == "op":
                self.advance()
                node = Mul(node, self.factor())
            elif kind == "ident" or value == "(":
                node = Mul(node, self.factor())
            else:
                return node

    def factor(self) -> Term:
        node = self.atom()
        while self.peek()[1] == "^":
            self.advance()
            kind, value, position = self.advance()
            if kind != "number":
                raise TermSyntaxError("expected an exponent", position)
            k = int(value)
            if k == -1:
                node = Inv(node)
            elif k >= 1:
                node = power(node, k)
            else:
                raise TermSyntaxError(f"exponent {k} is not allowed", position)
        return node

    def atom(self) -> Term:
        kind, value, position = self.advance()
        if kind == "ident":
            name, primed = value.rstrip("'"), value.endswith("'")
            macro = _MACRO.fullmatch(name) if self.macros else None
            if macro:
                return word_term(vn_pair(int(macro.group(1)))[1 if primed else 0])
            if primed:
                raise TermSyntaxError("' is only allowed after a vN macro", position + len(name))
            return Var(name)
        if value == "(" and kind == "op":
            node = self.sum()
            self.expect(")")
            return node
        raise TermSyntaxError("expected a variable or '('", position)


def parse_term(text: str, signature: Optional[str] = None, macros: bool = False) -> Term:
    """
    解析项
    :param text: 项的文本
    :param signature: 签名；None 时按内容推断
    :param macros: 是否展开 vN / vN' 宏
    """
    parser = _Parser(text, macros)
    node = parser.sum()
    parser.expect_end()
    check_signature(node, signature or signature_of(node))
    return node


def parse_identity(text: str, signature: Optional[str] = None, macros: bool = False) -> Identity:
    parser = _Parser(text, macros)
    lhs = parser.sum()
    parser.expect("=")
    rhs = parser.sum()
    parser.expect_end()
    if signature is None:
        found = {signature_of(lhs), signature_of(rhs)} - {TIMES_ONLY}
        if len(found) > 1:
            raise SignatureError("the two sides use different signatures")
        signature = found.pop() if found else TIMES_ONLY
    check_signature(lhs, signature)
    check_signature(rhs, signature)
    return Identity(lhs, rhs, signature)


def _fold(node: Term, env: Dict[str, object], A):
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnboundVariableError(f"variable {node.name} is not assigned") from None
    if isinstance(node, Mul):
        spine = []
        while isinstance(node, Mul):
            spine.append(node.right)
            node = node.left
        value = _fold(node, env, A)
        for right in reversed(spine):
            value = A.mul[value, _fold(right, env, A)]
        return value
    if isinstance(node, Add):
        if A.add is None:
            raise SignatureError(f"{A.kind} has no addition")
        return A.add[_fold(node.left, env, A), _fold(node.right, env, A)]
    if A.inv is None:
        raise SignatureError(f"{A.kind} has no inversion")
    return A.inv[_fold(node.child, env, A)]


def evaluate(t: Term, env: Dict[str, object], A):
    """结构折叠；env 的值可以是元素编号，也可以是编号数组（逐点求值）"""
    return _fold(t, env, A)


def eval_term(t: Term, assignment: Dict[str, int], A) -> int:
    return int(_fold(t, assignment, A))


def rewrite_plus_to_inv(t: Term, p: int = 2) -> Term:
    """x + y ↦ (x·y⁻¹)^p·x，递归替换"""
    if p < 1:
        raise WorkbenchError(f"p must be positive, got {p}")
    if isinstance(t, Var):
        return t
    if isinstance(t, Inv):
        return Inv(rewrite_plus_to_inv(t.child, p))
    left, right = rewrite_plus_to_inv(t.left, p), rewrite_plus_to_inv(t.right, p)
    if isinstance(t, Mul):
        return Mul(left, right)
    return Mul(power(Mul(left, Inv(right)), p), left)
