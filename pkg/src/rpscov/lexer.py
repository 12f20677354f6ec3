"""Tokenizer for RPS source text."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from rpscov.errors import ParseError
from rpscov.spans import SourceSpan

KEYWORDS = {
    "enum", "struct", "const", "static", "mut", "fn", "let", "else", "if",
    "match", "while", "return", "true", "false", "ref",
}

# Multi-character operators first; the scanner applies maximal munch.
PUNCT = [
    "..=", "::", "->", "=>", "==", "!=", "<=", ">=", "&&", "||", "..",
    "{", "}", "(", ")", "[", "]", ",", ";", ":", "=", "<", ">", "+", "-",
    "*", "/", "%", "&", "!", "?", "@", ".", "|", "#",
]

INT_SUFFIXES = ("i8", "u8", "i16", "u16", "i32", "u32")

ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"', "0": "\0"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'kw' | 'int' | 'char' | 'str' | punct text | 'eof'
    text: str
    span: SourceSpan
    value: object = None  # int value / decoded char / decoded string
    suffix: Optional[str] = None  # int type suffix, if written


class Lexer:
    def __init__(self, src: str, file: str = "<input>") -> None:
        self.src = src
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, msg: str) -> ParseError:
        span = SourceSpan(self.file, self.line, self.col, self.line, self.col)
        return ParseError(msg, span)

    def _peek(self, off: int = 0) -> str:
        i = self.pos + off
        return self.src[i] if i < len(self.src) else ""

    def _advance(self, n: int = 1) -> str:
        out = self.src[self.pos : self.pos + n]
        for c in out:
            if c == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return out

    def _skip_trivia(self) -> None:
        while self.pos < len(self.src):
            c = self._peek()
            if c in " \t\r\n":
                self._advance()
            elif c == "/" and self._peek(1) == "/":
                while self.pos < len(self.src) and self._peek() != "\n":
                    self._advance()
            elif c == "/" and self._peek(1) == "*":
                depth = 0
                while self.pos < len(self.src):
                    if self._peek() == "/" and self._peek(1) == "*":
                        depth += 1
                        self._advance(2)
                    elif self._peek() == "*" and self._peek(1) == "/":
                        depth -= 1
                        self._advance(2)
                        if depth == 0:
                            break
                    else:
                        self._advance()
                else:
                    raise self.error("unterminated block comment")
            else:
                return

    def tokens(self) -> list[Token]:
        out: list[Token] = []
        while True:
            self._skip_trivia()
            if self.pos >= len(self.src):
                here = SourceSpan(self.file, self.line, self.col, self.line, self.col)
                out.append(Token("eof", "", here))
                return out
            out.append(self._next_token())

    def _next_token(self) -> Token:
        sl, sc = self.line, self.col
        c = self._peek()

        def span() -> SourceSpan:
            return SourceSpan(self.file, sl, sc, self.line, self.col)

        if c.isdigit():
            return self._number(sl, sc)
        if c.isalpha() or c == "_":
            text = self._advance()
            while self._peek().isalnum() or self._peek() == "_":
                text += self._advance()
            kind = "kw" if text in KEYWORDS else "ident"
            return Token(kind, text, span())
        if c == "'":
            return self._char(sl, sc)
        if c == '"':
            return self._string(sl, sc)
        for p in PUNCT:
            if self.src.startswith(p, self.pos):
                self._advance(len(p))
                return Token(p, p, span())
        raise self.error(f"unexpected character {c!r}")

    def _number(self, sl: int, sc: int) -> Token:
        hex_digits = "0123456789abcdefABCDEF_"
        text = ""
        # Note: _peek() returns "" at end of input, and "" is a substring
        # of everything; membership tests must exclude it.
        if self._peek() == "0" and self._peek(1) in ("x", "X"):
            text += self._advance(2)
            while self._peek() != "" and self._peek() in hex_digits:
                text += self._advance()
            digits = text[2:].replace("_", "")
            if not digits:
                raise self.error("hex literal needs digits")
            value = int(digits, 16)
        else:
            while self._peek().isdigit() or self._peek() == "_":
                text += self._advance()
            value = int(text.replace("_", ""))
        suffix = None
        for s in INT_SUFFIXES:
            if self.src.startswith(s, self.pos):
                nxt = self.pos + len(s)
                follow = self.src[nxt] if nxt < len(self.src) else ""
                if not (follow.isalnum() or follow == "_"):
                    suffix = s
                    text += self._advance(len(s))
                    break
        sp = SourceSpan(self.file, sl, sc, self.line, self.col)
        return Token("int", text, sp, value, suffix)

    def _escape(self) -> str:
        self._advance()  # backslash
        c = self._advance()
        if c in ESCAPES:
            return ESCAPES[c]
        if c == "u" and self._peek() == "{":
            self._advance()
            digits = ""
            while self._peek() != "" and self._peek() in "0123456789abcdefABCDEF":
                digits += self._advance()
            if self._peek() != "}" or not digits:
                raise self.error("malformed \\u{...} escape")
            self._advance()
            cp = int(digits, 16)
            if cp > 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
                raise self.error("escape is not a Unicode scalar value")
            return chr(cp)
        raise self.error(f"unknown escape \\{c}")

    def _char(self, sl: int, sc: int) -> Token:
        self._advance()  # opening quote
        if self._peek() == "\\":
            ch = self._escape()
        elif self._peek() in ("", "\n", "'"):
            raise self.error("empty or unterminated char literal")
        else:
            ch = self._advance()
        if self._peek() != "'":
            raise self.error("unterminated char literal")
        self._advance()
        sp = SourceSpan(self.file, sl, sc, self.line, self.col)
        return Token("char", f"'{ch}'", sp, ch)

    def _string(self, sl: int, sc: int) -> Token:
        self._advance()  # opening quote
        out = []
        while True:
            c = self._peek()
            if c in ("", "\n"):
                raise self.error("unterminated string literal")
            if c == '"':
                self._advance()
                break
            if c == "\\":
                out.append(self._escape())
            else:
                out.append(self._advance())
        text = "".join(out)
        sp = SourceSpan(self.file, sl, sc, self.line, self.col)
        return Token("str", f'"{text}"', sp, text)


def tokenize(src: str, file: str = "<input>") -> list[Token]:
    return Lexer(src, file).tokens()
