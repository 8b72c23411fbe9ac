"""Shared expression grammar, presentation file format, and printers.

Expressions: generator identifiers (maximal munch against the alphabet, so
names like ``p+`` and ``p0inv`` lex as single tokens), juxtaposition or ``*``
for products, ``+ -``, scalar literals over the parameters ``q`` and ``eta``
(with possibly negative ``^`` exponents), ``^n`` on generators as n-fold
repetition, and ``(x)`` as the tensor separator in coproduct expressions.

File format (one declaration per line, ``#`` comments):

    bundle <name>
    order cross|deglex
    gen <name> block=<H|A|A1|A2> prec=<int> [inv=<name>]
    rule <word> -> <ncpoly-expression>
    cop <gen> -> <sum of (word)(x)(word) terms>
    counit <gen> -> <scalar>
    antipode <gen> -> <ncpoly>
    act <A-gen> <H-gen> -> <ncpoly>
    subalgebra <tag> = <gen> <gen> ...
    variant <name>
    map <tag> <gen> -> <ncpoly>
    identity <tag> : <expr> == <expr>
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import Scalar, ZeroDenominator
from .ncpoly import NCPoly, TensorPoly, Generator, EMPTY_WORD

__all__ = [
    "ParseError",
    "parse_expr",
    "parse_scalar",
    "parse_tensor",
    "parse_word",
    "parse_bundle_text",
    "BundleSections",
    "format_scalar",
    "format_word",
    "format_poly",
    "format_tensor",
]


class ParseError(ValueError):
    def __init__(self, message, text=None, pos=None, line=None):
        self.pos = pos
        self.line = line
        loc = ""
        if line is not None:
            loc = f" (line {line})"
        elif text is not None and pos is not None:
            col = pos + 1
            loc = f" (column {col})"
        super().__init__(message + loc)


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_OPS = set("+-*/^()")


class _Tokens:
    def __init__(self, text, names, tensor_mode=False):
        self.text = text
        self.toks = []           # (kind, value, pos)
        by_first = {}
        for n in sorted(names, key=len, reverse=True):
            by_first.setdefault(n[0], []).append(n)
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if tensor_mode and text.startswith("(x)", i):
                self.toks.append(("TENSOR", "(x)", i))
                i += 3
                continue
            matched = None
            for cand in by_first.get(ch, ()):
                if text.startswith(cand, i):
                    end = i + len(cand)
                    # word boundary: an alnum-ending name must not run into
                    # further identifier characters
                    if cand[-1].isalnum() and end < n and (text[end].isalnum() or text[end] == "_"):
                        continue
                    matched = cand
                    break
            if matched:
                self.toks.append(("NAME", matched, i))
                i += len(matched)
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(("INT", int(text[i:j]), i))
                i = j
                continue
            if ch in _OPS:
                self.toks.append(("OP", ch, i))
                i += 1
                continue
            j = i
            while j < n and not text[j].isspace() and text[j] not in _OPS:
                j += 1
            raise ParseError(f"unknown identifier {text[i:j]!r}", text=text, pos=i)
        self.k = 0

    def peek(self):
        if self.k < len(self.toks):
            return self.toks[self.k]
        return ("EOF", None, len(self.text))

    def next(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "OP" or val != op:
            raise ParseError(f"expected {op!r}", text=self.text, pos=pos)


# ---------------------------------------------------------------------------
# expression parser
# ---------------------------------------------------------------------------

class _ExprParser:
    def __init__(self, text, alphabet, bindings=None, tensor_mode=False):
        self.alphabet = alphabet
        self.bindings = bindings or {}
        names = set(self.bindings)
        if alphabet is not None:
            names |= set(alphabet.names())
        names |= {"q", "eta"}
        self.t = _Tokens(text, names, tensor_mode=tensor_mode)
        self.text = text

    # sum := product (('+'|'-') product)*
    def parse_sum(self):
        out = self.parse_product()
        while True:
            kind, val, _ = self.t.peek()
            if kind == "OP" and val in "+-":
                self.t.next()
                rhs = self.parse_product()
                out = out + rhs if val == "+" else out - rhs
            else:
                return out

    # product := unary (unary | '*' unary | '/' unary)*
    def parse_product(self):
        out = self.parse_unary()
        while True:
            kind, val, pos = self.t.peek()
            if kind == "OP" and val in "*/":
                self.t.next()
                rhs = self.parse_unary()
                if val == "*":
                    out = out * rhs
                else:
                    if not rhs.is_scalar():
                        raise ParseError("division by a non-scalar expression",
                                         text=self.text, pos=pos)
                    c = rhs.scalar_part()
                    if c.is_zero():
                        raise ParseError("division by zero", text=self.text, pos=pos)
                    out = out.scale(c.inverse())
            elif kind in ("NAME", "INT") or (kind == "OP" and val == "("):
                out = out * self.parse_unary()
            else:
                return out

    def parse_unary(self):
        kind, val, _ = self.t.peek()
        sign = 1
        while kind == "OP" and val in "+-":
            self.t.next()
            if val == "-":
                sign = -sign
            kind, val, _ = self.t.peek()
        out = self.parse_postfix()
        return out if sign > 0 else -out

    def parse_postfix(self):
        out = self.parse_atom()
        while True:
            kind, val, pos = self.t.peek()
            if kind == "OP" and val == "^":
                self.t.next()
                n = self._signed_int()
                if n < 0:
                    if not out.is_scalar():
                        raise ParseError("negative exponents are only defined for scalars",
                                         text=self.text, pos=pos)
                    c = out.scalar_part()
                    if c.is_zero():
                        raise ParseError("negative power of zero", text=self.text, pos=pos)
                    inv = c.inverse()
                    acc = Scalar.from_int(1)
                    for _ in range(-n):
                        acc = acc * inv
                    out = NCPoly.from_scalar(acc)
                else:
                    acc = NCPoly.one()
                    for _ in range(n):
                        acc = acc * out
                    out = acc
            else:
                return out

    def _signed_int(self):
        kind, val, pos = self.t.peek()
        sign = 1
        if kind == "OP" and val in "+-":
            self.t.next()
            sign = -1 if val == "-" else 1
            kind, val, pos = self.t.peek()
        if kind != "INT":
            raise ParseError("expected an integer exponent", text=self.text, pos=pos)
        self.t.next()
        return sign * val

    def parse_atom(self):
        kind, val, pos = self.t.next()
        if kind == "INT":
            return NCPoly.from_scalar(Scalar.from_int(val))
        if kind == "NAME":
            if val == "q":
                return NCPoly.from_scalar(Scalar.q_power(1))
            if val == "eta":
                return NCPoly.from_scalar(Scalar.eta_power(1))
            if val in self.bindings:
                return self.bindings[val]
            return NCPoly.from_gen(val)
        if kind == "OP" and val == "(":
            out = self.parse_sum()
            self.t.expect_op(")")
            return out
        raise ParseError("expected a value", text=self.text, pos=pos)

    def finish(self, value):
        kind, _, pos = self.t.peek()
        if kind != "EOF":
            raise ParseError("trailing input", text=self.text, pos=pos)
        return value


def parse_expr(text, alphabet, bindings=None):
    """Parse an expression into an NCPoly over the given alphabet."""
    p = _ExprParser(text, alphabet, bindings)
    return p.finish(p.parse_sum())


def parse_scalar(text):
    """Parse a pure scalar literal."""
    p = _ExprParser(text, None)
    out = p.finish(p.parse_sum())
    if not out.is_scalar():
        raise ParseError("expected a scalar expression", text=text, pos=0)
    return out.scalar_part()


def parse_word(text, alphabet):
    """Parse a product of generators (with ^n repetitions) into a word."""
    p = _ExprParser(text, alphabet)
    out = p.finish(p.parse_sum())
    if len(out.terms) != 1:
        raise ParseError("expected a single word", text=text, pos=0)
    (word, c), = out.terms.items()
    if not c.is_one():
        raise ParseError("expected a bare word without coefficient", text=text, pos=0)
    return word


def parse_tensor(text, alphabet, bindings=None):
    """Parse a sum of (expr)(x)(expr) terms into a TensorPoly."""
    p = _ExprParser(text, alphabet, bindings, tensor_mode=True)
    t = p.t
    out = TensorPoly()
    sign = 1
    kind, val, _ = t.peek()
    if kind == "OP" and val in "+-":
        t.next()
        sign = -1 if val == "-" else 1
    while True:
        left = p.parse_product()
        kind, val, pos = t.next()
        if kind != "TENSOR":
            raise ParseError("expected (x) between tensor slots", text=text, pos=pos)
        right = p.parse_product()
        term = TensorPoly.of(left, right)
        out = out + (term if sign > 0 else -term)
        kind, val, pos = t.peek()
        if kind == "EOF":
            return out
        if kind == "OP" and val in "+-":
            t.next()
            sign = -1 if val == "-" else 1
            continue
        raise ParseError("expected + or - between tensor terms", text=text, pos=pos)


# ---------------------------------------------------------------------------
# printers
# ---------------------------------------------------------------------------

def _monomial_pieces(coeff, q_exp, eta_exp):
    pieces = []
    if isinstance(coeff, Fraction):
        if coeff.denominator != 1:
            pieces.append(f"({coeff.numerator}/{coeff.denominator})")
        elif coeff.numerator != 1 or (q_exp == 0 and eta_exp == 0):
            pieces.append(str(coeff.numerator))
    else:
        if coeff != 1 or (q_exp == 0 and eta_exp == 0):
            pieces.append(str(coeff))
    if q_exp:
        pieces.append("q" if q_exp == 1 else f"q^{q_exp}")
    if eta_exp:
        pieces.append("eta" if eta_exp == 1 else f"eta^{eta_exp}")
    return " ".join(pieces)


def _poly_str(p):
    """Render a ParamPoly, e.g. 'q^2 - 1'."""
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), reverse=True)
    parts = []
    for k, ((eq, ee), c) in enumerate(items):
        body = _monomial_pieces(abs(c), eq, ee)
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_scalar(s):
    """Canonical scalar rendering; negative parameter powers fold into q^-n."""
    num, den = s.num, s.den
    if den.is_one():
        return _poly_str(num)
    if num.is_monomial() and den.is_monomial():
        (nq, ne), nc = num.leading()
        (dq, de), dc = den.leading()
        return _monomial_pieces(Fraction(nc, dc), nq - dq, ne - de)
    num_str = _poly_str(num)
    den_str = _poly_str(den)
    if len(num.terms) > 1:
        num_str = f"({num_str})"
    if len(den.terms) > 1 or not num.is_monomial():
        den_str = f"({den_str})"
        return f"{num_str}/{den_str}"
    return f"{num_str}/({den_str})"


def _coeff_prefix(s):
    """Coefficient rendering suitable for juxtaposition before a word."""
    if s.is_one():
        return ""
    text = format_scalar(s)
    if ("+" in text or " - " in text or text.startswith("-")) and not (
            text.startswith("(") and text.endswith(")")):
        text = f"({text})"
    return text + " "


def format_word(w):
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        parts.append(w[i] if j - i == 1 else f"{w[i]}^{j - i}")
        i = j
    return " ".join(parts)


def format_poly(e, order=None):
    """Render an NCPoly, words descending in the presentation order."""
    if e.is_zero():
        return "0"
    if order is not None:
        items = sorted(e.terms.items(), key=lambda kv: order.sort_key(kv[0]), reverse=True)
    else:
        items = sorted(e.terms.items(), key=lambda kv: (len(kv[0]), kv[0]), reverse=True)
    parts = []
    for k, (w, c) in enumerate(items):
        neg = c.is_negative_form()
        mag = -c if neg else c
        if w == EMPTY_WORD:
            body = format_scalar(mag)
            if "+" in body or " - " in body:
                body = f"({body})"
        else:
            body = _coeff_prefix(mag) + format_word(w)
        if k == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def format_tensor(t, order=None):
    if t.is_zero():
        return "0"
    if order is not None:
        key = lambda kv: (order.sort_key(kv[0][0]), order.sort_key(kv[0][1]))
    else:
        key = lambda kv: kv[0]
    items = sorted(t.terms.items(), key=key, reverse=True)
    parts = []
    for k, ((u, v), c) in enumerate(items):
        neg = c.is_negative_form()
        mag = -c if neg else c
        body = f"{_coeff_prefix(mag)}{format_word(u)} (x) {format_word(v)}"
        if k == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# bundle / presentation file format
# ---------------------------------------------------------------------------

@dataclass
class BundleSections:
    name: str | None = None
    order_kind: str | None = None
    gens: list = field(default_factory=list)
    rules: list = field(default_factory=list)            # (word, NCPoly)
    cop: dict = field(default_factory=dict)              # gen -> TensorPoly
    counit: dict = field(default_factory=dict)           # gen -> Scalar
    antipode: dict = field(default_factory=dict)         # gen -> NCPoly
    acts: dict = field(default_factory=dict)             # (a, h) -> NCPoly
    subalgebras: dict = field(default_factory=dict)      # tag -> tuple of names
    maps: dict = field(default_factory=dict)             # variant -> tag -> gen -> NCPoly
    identities: list = field(default_factory=list)       # (tag, lhs_str, rhs_str)

    def alphabet(self):
        from .ncpoly import Alphabet
        return Alphabet(self.gens)


def _split_arrow(body, line_no, arrow="->"):
    if arrow not in body:
        raise ParseError(f"expected {arrow!r}", line=line_no)
    lhs, rhs = body.split(arrow, 1)
    return lhs.strip(), rhs.strip()


def parse_bundle_text(text, path=None, alphabet=None):
    """Parse the line-oriented bundle/presentation format.

    Files without gen lines (bare map/action tables) parse against the
    supplied external alphabet.
    """
    sections = BundleSections()
    lines = text.splitlines()

    # first pass: generators (needed to parse every expression)
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, body = line.partition(" ")
        if head == "gen":
            fields = body.split()
            if not fields:
                raise ParseError("gen line without a name", line=no)
            name = fields[0]
            block = prec = inv = None
            for f in fields[1:]:
                if f.startswith("block="):
                    block = f[6:]
                elif f.startswith("prec="):
                    prec = int(f[5:])
                elif f.startswith("inv="):
                    inv = f[4:]
                else:
                    raise ParseError(f"unknown gen attribute {f!r}", line=no)
            if block is None or prec is None:
                raise ParseError("gen line needs block= and prec=", line=no)
            sections.gens.append(Generator(name, block, prec, inv))

    if sections.gens:
        alphabet = sections.alphabet()
    current_variant = "default"

    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, body = line.partition(" ")
        body = body.strip()
        try:
            if head == "gen":
                continue
            elif head == "bundle":
                sections.name = body
            elif head == "order":
                if body not in ("cross", "deglex"):
                    raise ParseError(f"unknown order {body!r}", line=no)
                sections.order_kind = body
            elif head == "rule":
                lhs, rhs = _split_arrow(body, no)
                sections.rules.append((parse_word(lhs, alphabet), parse_expr(rhs, alphabet)))
            elif head == "cop":
                lhs, rhs = _split_arrow(body, no)
                sections.cop[lhs] = parse_tensor(rhs, alphabet)
            elif head == "counit":
                lhs, rhs = _split_arrow(body, no)
                sections.counit[lhs] = parse_scalar(rhs)
            elif head == "antipode":
                lhs, rhs = _split_arrow(body, no)
                sections.antipode[lhs] = parse_expr(rhs, alphabet)
            elif head == "act":
                lhs, rhs = _split_arrow(body, no)
                pair = lhs.split()
                if len(pair) != 2:
                    raise ParseError("act line needs two generators", line=no)
                sections.acts[(pair[0], pair[1])] = parse_expr(rhs, alphabet)
            elif head == "subalgebra":
                tag, _, names = body.partition("=")
                sections.subalgebras[tag.strip()] = tuple(names.split())
            elif head == "variant":
                current_variant = body
                sections.maps.setdefault(current_variant, {})
            elif head == "map":
                fields = body.split(None, 1)
                if len(fields) != 2:
                    raise ParseError("map line needs a tag and a generator", line=no)
                tag = fields[0]
                lhs, rhs = _split_arrow(fields[1], no)
                vmaps = sections.maps.setdefault(current_variant, {})
                vmaps.setdefault(tag, {})[lhs.strip()] = parse_expr(rhs, alphabet)
            elif head == "identity":
                tag, _, rest = body.partition(":")
                if "==" not in rest:
                    raise ParseError("identity line needs '=='", line=no)
                lhs, rhs = rest.split("==", 1)
                sections.identities.append((tag.strip(), lhs.strip(), rhs.strip()))
            else:
                raise ParseError(f"unknown declaration {head!r}", line=no)
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), line=no) from None
            raise
    return sections


def parse_bundle_file(path, alphabet=None):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_bundle_text(fh.read(), path=path, alphabet=alphabet)
