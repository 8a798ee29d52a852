"""
Loaders - Đọc dữ liệu WordNet 3.0 và định dạng taxonomy tổng hợp

Two inputs are supported:
- WordNet 3.0 noun database files (data.noun, optionally index.noun)
- the line-oriented synthetic format used for fixtures:
    SYN <id> WORDS <lemma>[,<lemma>...] PARENTS [<id>[,<id>...]] [GLOSS <text>]
"""

import io
import os
import logging
import re
from typing import BinaryIO, Dict, List, Optional, TextIO, Tuple, Union

from pydantic import BaseModel, ConfigDict

from .exceptions import ParseError, WrongPartOfSpeech
from .graph import VIRTUAL_ROOT, Synset, Taxonomy, build

logger = logging.getLogger(__name__)

# Both hypernym and instance hypernym pointers count as IS-A.
ISA_POINTERS = frozenset({"@", "@i"})


# ============== WORDNET 3.0 ==============


class Pointer(BaseModel):
    model_config = ConfigDict(frozen=True)

    symbol: str
    target_offset: str
    target_pos: str
    source_target: str


class RawDataLine(BaseModel):
    """One parsed data.noun synset line"""

    model_config = ConfigDict(frozen=True)

    synset_offset: str
    lex_filenum: int
    ss_type: str
    w_cnt: int
    words: Tuple[Tuple[str, int], ...]
    pointers: Tuple[Pointer, ...]
    gloss: Optional[str] = None

    def hypernyms(self) -> Tuple[str, ...]:
        return tuple(
            p.target_offset
            for p in self.pointers
            if p.symbol in ISA_POINTERS and p.target_pos == "n"
        )

    def to_synset(self) -> Synset:
        return Synset(
            id=self.synset_offset,
            words=tuple(word for word, _ in self.words),
            parents=self.hypernyms(),
            gloss=self.gloss,
        )


def _is_header(line: str) -> bool:
    return line.startswith("  ")


def parse_data_line(line: str, line_number: Optional[int] = None) -> RawDataLine:
    """
    Parse one data.noun line:
        synset_offset lex_filenum ss_type w_cnt word lex_id [...] p_cnt [ptr...] | gloss
    """
    body, bar, gloss = line.rstrip("\n").partition("|")
    fields = body.split()
    if len(fields) < 5:
        raise ParseError(line_number, "too few fields")

    offset, lex_filenum, ss_type, w_cnt_hex = fields[:4]
    if not (len(offset) == 8 and offset.isdigit()):
        raise ParseError(line_number, f"bad synset offset {offset!r}")
    if ss_type != "n":
        raise WrongPartOfSpeech(line_number, f"synset type {ss_type!r} in a noun file")
    try:
        lex_filenum_value = int(lex_filenum)
        w_cnt = int(w_cnt_hex, 16)
    except ValueError:
        raise ParseError(line_number, "bad lex_filenum or w_cnt") from None
    if w_cnt < 1:
        raise ParseError(line_number, "synset without words")

    cursor = 4
    words: List[Tuple[str, int]] = []
    for _ in range(w_cnt):
        if cursor + 1 >= len(fields):
            raise ParseError(line_number, f"w_cnt {w_cnt} does not match the word list")
        word, lex_id = fields[cursor], fields[cursor + 1]
        try:
            words.append((word.lower(), int(lex_id, 16)))
        except ValueError:
            raise ParseError(line_number, f"bad lex_id {lex_id!r}") from None
        cursor += 2

    if cursor >= len(fields):
        raise ParseError(line_number, "missing p_cnt")
    try:
        p_cnt = int(fields[cursor])
    except ValueError:
        raise ParseError(line_number, f"bad p_cnt {fields[cursor]!r}") from None
    cursor += 1

    pointers: List[Pointer] = []
    for _ in range(p_cnt):
        chunk = fields[cursor : cursor + 4]
        if len(chunk) < 4:
            raise ParseError(line_number, f"p_cnt {p_cnt} does not match the pointer list")
        symbol, target, pos, source_target = chunk
        if not (len(target) == 8 and target.isdigit()):
            raise ParseError(line_number, f"bad pointer offset {target!r}")
        pointers.append(
            Pointer(
                symbol=symbol,
                target_offset=target,
                target_pos=pos,
                source_target=source_target,
            )
        )
        cursor += 4

    # Noun lines have no verb frames; anything else before the gloss is junk
    if cursor != len(fields):
        raise ParseError(line_number, "unexpected trailing fields before gloss")

    return RawDataLine(
        synset_offset=offset,
        lex_filenum=lex_filenum_value,
        ss_type=ss_type,
        w_cnt=w_cnt,
        words=tuple(words),
        pointers=tuple(pointers),
        gloss=(gloss.strip() or None) if bar else None,
    )


def _iter_lines(stream: Union[BinaryIO, TextIO, bytes, str]):
    """Yield (line_number, byte_offset, text) for a byte or text stream"""
    if isinstance(stream, (bytes, str)):
        stream = io.BytesIO(stream.encode("utf-8") if isinstance(stream, str) else stream)
    position = 0
    for line_number, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            size = len(raw)
            text = raw.decode("utf-8")
        else:
            text = raw
            size = len(raw.encode("utf-8"))
        yield line_number, position, text
        position += size


def parse_data_noun(
    data_noun: Union[BinaryIO, bytes], verify_offsets: bool = False
) -> List[RawDataLine]:
    records: List[RawDataLine] = []
    for line_number, position, text in _iter_lines(data_noun):
        if _is_header(text) or not text.strip():
            continue
        record = parse_data_line(text, line_number)
        if verify_offsets and int(record.synset_offset) != position:
            raise ParseError(
                line_number,
                f"synset offset {record.synset_offset} is not the line's byte position {position}",
            )
        records.append(record)
    return records


def parse_index_noun(index_noun: Union[BinaryIO, bytes]) -> Dict[str, Tuple[str, ...]]:
    """
    Parse index.noun into lemma -> synset offsets:
        lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt tagsense_cnt synset_offset [...]
    """
    index: Dict[str, Tuple[str, ...]] = {}
    for line_number, _, text in _iter_lines(index_noun):
        if _is_header(text) or not text.strip():
            continue
        fields = text.split()
        try:
            lemma, pos, synset_cnt, p_cnt = fields[0], fields[1], int(fields[2]), int(fields[3])
        except (IndexError, ValueError):
            raise ParseError(line_number, "malformed index entry") from None
        if pos != "n":
            raise WrongPartOfSpeech(line_number, f"pos {pos!r} in a noun index")
        offsets = fields[4 + p_cnt + 2 :]
        if len(offsets) != synset_cnt:
            raise ParseError(
                line_number, f"synset_cnt {synset_cnt} does not match {len(offsets)} offsets"
            )
        index[lemma.lower()] = tuple(offsets)
    return index


def validate_index(taxonomy: Taxonomy, index: Dict[str, Tuple[str, ...]]) -> List[str]:
    """Cross-check index.noun against the loaded synsets; returns problem lines"""
    problems: List[str] = []
    for lemma in sorted(index):
        for offset in index[lemma]:
            synset = taxonomy.synsets.get(offset)
            if synset is None:
                problems.append(f"{lemma}: offset {offset} not in data.noun")
            elif lemma not in synset.words:
                problems.append(f"{lemma}: synset {offset} does not contain the lemma")
        if not index[lemma]:
            problems.append(f"{lemma}: no synsets listed")
    for problem in problems:
        logger.warning("index.noun: %s", problem)
    return problems


def load_wordnet(
    data_noun: Union[BinaryIO, bytes],
    index_noun: Optional[Union[BinaryIO, bytes]] = None,
    verify_offsets: bool = False,
) -> Taxonomy:
    """
    Load a WordNet 3.0 noun taxonomy.

    Args:
        data_noun: byte stream of data.noun
        index_noun: optional byte stream of index.noun, used for lemma validation
        verify_offsets: check each synset offset equals its byte position

    Returns:
        Taxonomy with the WordNet noun roots attached to the virtual root
    """
    records = parse_data_noun(data_noun, verify_offsets=verify_offsets)
    taxonomy = build(record.to_synset() for record in records)
    logger.info("Loaded %d WordNet noun synsets", len(records))
    if index_noun is not None:
        validate_index(taxonomy, parse_index_noun(index_noun))
    return taxonomy


# ============== SYNTHETIC FORMAT ==============

_SYN_LINE = re.compile(
    r"^SYN\s+(?P<id>\S+)"
    r"\s+WORDS\s+(?P<words>\S+)"
    r"\s+PARENTS(?:\s+(?!GLOSS(?:\s|$))(?P<parents>\S+))?"
    r"(?:\s+GLOSS\s+(?P<gloss>.*?))?\s*$"
)


def _split_list(value: Optional[str]) -> Tuple[str, ...]:
    if not value:
        return ()
    return tuple(item for item in value.split(",") if item)


def parse_synthetic(text: Union[TextIO, str]) -> List[Synset]:
    lines = text.splitlines() if isinstance(text, str) else text
    synsets: List[Synset] = []
    for line_number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _SYN_LINE.match(stripped)
        if match is None:
            raise ParseError(line_number, f"not a SYN record: {stripped[:60]!r}")
        if match["id"] == VIRTUAL_ROOT:
            raise ParseError(line_number, f"{VIRTUAL_ROOT} is reserved for the virtual root")
        words = _split_list(match["words"])
        if not words:
            raise ParseError(line_number, "synset without words")
        synsets.append(
            Synset(
                id=match["id"],
                words=words,
                parents=_split_list(match["parents"]),
                gloss=match["gloss"] or None,
            )
        )
    return synsets


def load_synthetic(text: Union[TextIO, str]) -> Taxonomy:
    """Load a taxonomy from the synthetic SYN-record format"""
    return build(parse_synthetic(text))


def dump_synthetic(taxonomy: Taxonomy) -> str:
    """Serialize back to the synthetic format (virtual root omitted)"""
    lines: List[str] = []
    for synset_id in sorted(taxonomy.synsets):
        if synset_id == VIRTUAL_ROOT:
            continue
        synset = taxonomy.synsets[synset_id]
        parents = [p for p in synset.parents if p != VIRTUAL_ROOT]
        line = f"SYN {synset_id} WORDS {','.join(synset.words)} PARENTS"
        if parents:
            line += f" {','.join(parents)}"
        if synset.gloss:
            line += f" GLOSS {synset.gloss}"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def load_taxonomy(path: str) -> Taxonomy:
    """Load either a WordNet dict directory or a synthetic taxonomy file"""
    if os.path.isdir(path):
        index_path = os.path.join(path, "index.noun")
        with open(os.path.join(path, "data.noun"), "rb") as data_noun:
            if os.path.exists(index_path):
                with open(index_path, "rb") as index_noun:
                    return load_wordnet(data_noun, index_noun)
            return load_wordnet(data_noun)
    with open(path, encoding="utf-8") as handle:
        return load_synthetic(handle.read())
