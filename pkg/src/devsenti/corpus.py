"""Post ingestion: markup stripping, tokenization, CSV input/output."""
import csv
import html
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

USER_TOKEN = "@USER"

# Emoticons recognised even when no lexicon is supplied.
DEFAULT_EMOTICONS = frozenset({
    ":)", ":-)", ":(", ":-(", ":D", ":-D", ";)", ";-)", ":P", ":-P", ":p",
    ":'(", ":/", ":-/", ":|", ":o", ":O", "<3", "xD", "XD", ":]", ":[",
    "=)", "=(", "^_^", "-_-", ":*",
})


class PostType(str, Enum):
    QUESTION = "question"
    ANSWER = "answer"
    QUESTION_COMMENT = "question_comment"
    ANSWER_COMMENT = "answer_comment"

    @property
    def code(self):
        return _TYPE_CODES[self]

    @classmethod
    def parse(cls, value):
        value = str(value).strip()
        if value in _CODE_TYPES:
            return _CODE_TYPES[value]
        return cls(value)


_TYPE_CODES = {
    PostType.QUESTION: "q",
    PostType.ANSWER: "a",
    PostType.QUESTION_COMMENT: "qc",
    PostType.ANSWER_COMMENT: "ac",
}
_CODE_TYPES = {v: k for k, v in _TYPE_CODES.items()}


@dataclass(frozen=True)
class RawPost:
    id: str
    post_type: PostType
    body: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("post id must be non-empty")
        if not isinstance(self.post_type, PostType):
            object.__setattr__(self, "post_type", PostType.parse(self.post_type))


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str = field(init=False)

    def __post_init__(self):
        if not self.surface:
            raise ValueError("empty token")
        object.__setattr__(self, "normalized", self.surface.casefold())


@dataclass(frozen=True)
class CleanDocument:
    id: str
    post_type: PostType
    text: str
    tokens: tuple
    sentences: tuple  # half-open (start, end) index ranges into tokens

    def sentence_tokens(self):
        for start, end in self.sentences:
            yield self.tokens[start:end]


# --- markup -----------------------------------------------------------------

_CODE_BLOCK = re.compile(
    r"<(pre|code)\b[^>]*>.*?</\1\s*>|```.*?```", re.IGNORECASE | re.DOTALL)
_UNCLOSED_CODE = re.compile(r"<(pre|code)\b[^>]*>.*\Z", re.IGNORECASE | re.DOTALL)
_COMMENT = re.compile(r"<!--.*?-->", re.DOTALL)
_BLOCK_TAG = re.compile(
    r"</?(p|br|div|li|ul|ol|h[1-6]|tr|td|blockquote|hr|table)\b[^>]*>", re.IGNORECASE)
_TAG = re.compile(r"</?[A-Za-z][^<>]*>|<[A-Za-z/!][^<>]*\Z")
_URL = re.compile(r"\b(?:(?:https?|ftp)://|www\.)[^\s<>\"]*", re.IGNORECASE)
_HSPACE = re.compile(r"[^\S\n]+")


def _strip_once(text):
    text = _COMMENT.sub(" ", text)
    text = _CODE_BLOCK.sub(" ", text)
    text = _UNCLOSED_CODE.sub(" ", text)
    text = _BLOCK_TAG.sub("\n", text)
    text = _TAG.sub(" ", text)
    text = html.unescape(text)
    text = _URL.sub(" ", text)
    lines = (_HSPACE.sub(" ", line).strip() for line in text.split("\n"))
    return "\n".join(line for line in lines if line)


def strip_markup(body: str) -> str:
    """Remove code blocks, HTML tags and URLs; decode entities.

    Applied until a fixpoint so that entity-encoded markup (``&lt;b&gt;``)
    cannot survive, which also makes the function idempotent.
    """
    text = body or ""
    for _ in range(16):
        stripped = _strip_once(text)
        if stripped == text:
            break
        text = stripped
    return text


# --- tokenization -----------------------------------------------------------

_TERMINAL = re.compile(r"^[.!?]+$")


def _emoticon_pattern(emo):
    pat = re.escape(emo)
    if emo[0].isalnum():
        pat = r"(?<![^\W_])" + pat
    if emo[-1].isalnum():
        pat = pat + r"(?![^\W_])"
    return pat


@lru_cache(maxsize=32)
def _token_regex(emoticons: frozenset):
    emos = sorted(emoticons, key=lambda e: (-len(e), e))
    parts = [_emoticon_pattern(e) for e in emos]
    parts += [
        r"[?!]+",                 # mark runs (and single marks)
        r"\.{2,}",                # ellipsis
        r"@[^\W_][\w.\-]*[^\W.\-]|@[^\W_]",  # user mentions
        r"\w+(?:'\w+)*",          # words, with inner apostrophes
        # any other single symbol, except control and invisible format characters
        r"[^\w\s\x00-\x1f\x7f-\x9f\u200b-\u200f\u2028-\u202f\u2060-\u206f\ufeff]",
    ]
    return re.compile("|".join(f"(?:{p})" for p in parts))


def tokenize(text: str, emoticons: Iterable[str] | None = None):
    """Split markup-free text into tokens and sentence ranges.

    Returns ``(tokens, sentences)`` where sentences are half-open index
    ranges partitioning ``tokens``. Sentences end after a run of ``.!?``
    tokens or at a line break.
    """
    inventory = DEFAULT_EMOTICONS if emoticons is None else frozenset(emoticons)
    regex = _token_regex(frozenset(inventory))
    tokens, sentences = [], []
    start = 0
    pending_break = False
    last_line = line = 0
    scanned = 0
    text = text or ""
    for m in regex.finditer(text):
        surface = m.group(0)
        if surface.startswith("@") and len(surface) > 1 and surface not in inventory:
            surface = USER_TOKEN
        line += text.count("\n", scanned, m.start())
        scanned = m.start()
        terminal = surface not in inventory and bool(_TERMINAL.match(surface))
        if tokens and (line != last_line or (pending_break and not terminal)):
            sentences.append((start, len(tokens)))
            start = len(tokens)
            pending_break = False
        if terminal:
            pending_break = True
        tokens.append(Token(surface))
        last_line = line
    if len(tokens) > start:
        sentences.append((start, len(tokens)))
    return tokens, sentences


def preprocess(post: RawPost, emoticons: Iterable[str] | None = None) -> CleanDocument:
    text = strip_markup(post.body)
    tokens, sentences = tokenize(text, emoticons)
    return CleanDocument(post.id, post.post_type, text, tuple(tokens), tuple(sentences))


def document_from_text(text, emoticons=None, id="doc", post_type=PostType.ANSWER):
    """Convenience for already-clean text (tests, interactive use)."""
    tokens, sentences = tokenize(text, emoticons)
    return CleanDocument(id, post_type, text, tuple(tokens), tuple(sentences))


# --- files ------------------------------------------------------------------

class PostFileError(ValueError):
    pass


def _reader(path, required):
    fh = open(path, newline="", encoding="utf-8")
    reader = csv.DictReader(fh)
    missing = [c for c in required if c not in (reader.fieldnames or [])]
    if reader.fieldnames is None:
        return fh, iter(())
    if missing:
        fh.close()
        raise PostFileError(f"{path}: missing column(s) {', '.join(missing)}")
    return fh, reader


def read_posts(path) -> list[RawPost]:
    """Read the ``id,post_type,text`` CSV format."""
    fh, reader = _reader(path, ("id", "post_type", "text"))
    posts = []
    with fh:
        for lineno, row in enumerate(reader, start=2):
            try:
                posts.append(RawPost(row["id"], PostType.parse(row["post_type"]), row["text"] or ""))
            except ValueError as exc:
                raise PostFileError(f"{path}:{lineno}: {exc}") from None
    return posts


def read_labeled_posts(path):
    """Read posts with an extra ``label`` column; returns (posts, labels)."""
    from .labels import as_label

    fh, reader = _reader(path, ("id", "post_type", "text", "label"))
    posts, labels = [], []
    with fh:
        for lineno, row in enumerate(reader, start=2):
            try:
                posts.append(RawPost(row["id"], PostType.parse(row["post_type"]), row["text"] or ""))
                labels.append(as_label(row["label"]))
            except ValueError as exc:
                raise PostFileError(f"{path}:{lineno}: {exc}") from None
    return posts, labels


def write_clean_csv(path, docs: Sequence[CleanDocument]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "post_type", "text"])
        for doc in docs:
            writer.writerow([doc.id, doc.post_type.code, doc.text])


def write_token_lines(path, docs: Sequence[CleanDocument]):
    """One document per line, normalized tokens separated by single spaces."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(" ".join(t.normalized for t in doc.tokens))
            fh.write("\n")
