"""Reader and writer for the OpenQASM 2.0 subset used for circuit interchange.

Accepted input::

    OPENQASM 2.0;
    include "qelib1.inc";          // optional
    qreg q[N];                     // exactly one
    h q[0]; ...                    // h x y z cx rx ry rz

Angle arguments are a decimal literal, ``pi``, or ``pi`` combined with a single
``*`` or ``/`` and a decimal literal (either side of ``*``). A run of ``h`` on
every qubit directly after the register declaration is taken to be the
implicit Hadamard prefix and is dropped from the body.
"""

from __future__ import annotations

import math
import re
from typing import Iterator

from .circuit import Circuit, GateKind, Instruction, wrap_angle


class QasmError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


def format_float(value: float) -> str:
    return format(value, ".17g")


def emit_qasm(circuit: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    lines.extend(f"h q[{i}];" for i in range(circuit.num_qubits))
    for instr in circuit.body:
        args = ",".join(f"q[{t}]" for t in instr.targets)
        if instr.angle is None:
            lines.append(f"{instr.kind.value} {args};")
        else:
            lines.append(f"{instr.kind.value}({format_float(instr.angle)}) {args};")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
    |(?P<comment>//[^\n]*)
    |(?P<newline>\n)
    |(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
    |(?P<string>"[^"\n]*")
    |(?P<name>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<arrow>->)
    |(?P<op>[;,()\[\]*/+-])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind: str, text: str, line: int, column: int):
        self.kind, self.text, self.line, self.column = kind, text, line, column

    def __repr__(self) -> str:
        return f"{self.kind}:{self.text!r}@{self.line}:{self.column}"


def _tokenize(text: str) -> Iterator[_Token]:
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise QasmError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "newline":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            yield _Token(kind, m.group(), line, m.start() - line_start + 1)
        pos = m.end()
    yield _Token("eof", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def fail(self, message: str, tok: _Token | None = None) -> QasmError:
        tok = tok or self.tok
        return QasmError(message, tok.line, tok.column)

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.fail(f"expected {text!r}, found {found!r}")
        return self.next()

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "number" or not tok.text.isdigit():
            raise self.fail(f"expected an integer, found {tok.text or 'end of input'!r}")
        self.next()
        return int(tok.text)

    def number(self) -> float:
        sign = 1.0
        if self.tok.text in ("-", "+"):
            sign = -1.0 if self.next().text == "-" else 1.0
        tok = self.tok
        if tok.kind != "number":
            raise self.fail(f"expected a number, found {tok.text or 'end of input'!r}")
        self.next()
        return sign * float(tok.text)

    def angle(self) -> float:
        sign = 1.0
        if self.tok.text in ("-", "+"):
            sign = -1.0 if self.next().text == "-" else 1.0
        if self.tok.text == "pi":
            self.next()
            value = math.pi
            if self.tok.text == "*":
                self.next()
                value = value * self.number()
            elif self.tok.text == "/":
                self.next()
                divisor = self.number()
                if divisor == 0.0:
                    raise self.fail("division by zero in angle")
                value = value / divisor
        else:
            value = self.number()
            if self.tok.text == "*":
                self.next()
                if self.tok.text != "pi":
                    raise self.fail("only pi may appear in an angle product")
                self.next()
                value = value * math.pi
        return sign * value

    def qubit(self, reg: str, size: int) -> int:
        tok = self.tok
        if tok.text != reg:
            raise self.fail(f"unknown register {tok.text!r}")
        self.next()
        self.expect("[")
        index_tok = self.tok
        index = self.integer()
        self.expect("]")
        if index >= size:
            raise self.fail(f"qubit index {index} out of range for {reg}[{size}]", index_tok)
        return index

    def parse(self) -> Circuit:
        self.expect("OPENQASM")
        version = self.tok
        if version.kind != "number" or version.text not in ("2.0", "2"):
            raise self.fail(f"unsupported OpenQASM version {version.text!r}")
        self.next()
        self.expect(";")
        if self.tok.text == "include":
            self.next()
            if self.tok.kind != "string":
                raise self.fail("expected a quoted file name after include")
            self.next()
            self.expect(";")
        if self.tok.text != "qreg":
            raise self.fail("missing qreg declaration")
        self.next()
        reg_tok = self.tok
        if reg_tok.kind != "name":
            raise self.fail("expected a register name")
        reg = self.next().text
        self.expect("[")
        size = self.integer()
        if size < 1:
            raise self.fail("register must hold at least one qubit", reg_tok)
        self.expect("]")
        self.expect(";")

        body: list[Instruction] = []
        while self.tok.kind != "eof":
            body.append(self.statement(reg, size))
        return Circuit(size, tuple(_strip_prefix(body, size)))

    def statement(self, reg: str, size: int) -> Instruction:
        tok = self.tok
        if tok.text == "qreg":
            raise self.fail("only one qreg declaration is supported")
        if tok.kind != "name":
            raise self.fail(f"expected a gate name, found {tok.text!r}")
        try:
            kind = GateKind(tok.text)
        except ValueError:
            raise self.fail(f"unsupported gate {tok.text!r}") from None
        self.next()
        angle = None
        if kind.parameterized:
            self.expect("(")
            angle = wrap_angle(self.angle())
            self.expect(")")
        targets = [self.qubit(reg, size)]
        for _ in range(kind.arity - 1):
            self.expect(",")
            targets.append(self.qubit(reg, size))
        self.expect(";")
        if len(set(targets)) != len(targets):
            raise self.fail("control and target must differ", tok)
        return Instruction(kind, tuple(targets), angle)


def _strip_prefix(body: list[Instruction], size: int) -> list[Instruction]:
    head = body[:size]
    if len(head) == size and all(instr.kind is GateKind.H for instr in head) and {
        instr.targets[0] for instr in head
    } == set(range(size)):
        return body[size:]
    return body


def parse_qasm(text: str) -> Circuit:
    return _Parser(text).parse()
