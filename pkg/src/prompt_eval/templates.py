"""
Translation preambles. A preamble is the instruction block of the prompt: role
statement, things to ensure, output constraints and worked examples. Each one
lives in its own YAML file:

    id: 6
    instructions: |
      You are an expert in translations.
      Your job is to translate the input to {{ language }} in the given chat.
    considerations: [...]
    constraints: Only output the translation.
    examples:
      - input: A cat on a sofa.
        output: {fr: Un chat sur un canapé., ja: ソファの上の猫。}
"""
import logging
import re

from dataclasses import dataclass, field
from pathlib import Path

from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateError

from corpus.languages import SOURCE_LANGUAGE, get_language
from prompt_eval.core import DuplicatePreamble, InvalidPreamble, SourceLanguageTarget
from utils import load_yaml



logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent.joinpath("templates")
PROMPT_TEMPLATE = "translation.md.j2"
ANCHOR = "Expected Output:"

_env = Environment(loader=FileSystemLoader(str(TEMPLATE_DIR)), trim_blocks=True,
                   lstrip_blocks=True, undefined=StrictUndefined)


@dataclass(frozen=True)
class Example:
    input: str
    # One text for every language, or a {language: text} mapping
    output: object

    def output_for(self, language):
        if isinstance(self.output, dict):
            return self.output.get(language)
        return self.output


@dataclass(frozen=True)
class PreambleTemplate:
    id: int
    instructions: str
    considerations: tuple = field(default_factory=tuple)
    constraints: str | None = None
    examples: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.id, int) or isinstance(self.id, bool):
            raise InvalidPreamble(f"Preamble id must be an integer, got {self.id!r}.")
        if not self.instructions or not self.instructions.strip():
            raise InvalidPreamble(f"Preamble {self.id} has no instructions.")

    @classmethod
    def from_dict(cls, d):
        if "id" not in d or "instructions" not in d:
            raise InvalidPreamble("A preamble needs at least `id` and `instructions`.")
        examples = tuple( Example(e["input"], e["output"]) for e in d.get("examples") or [] )
        return cls(d["id"], d["instructions"], tuple(d.get("considerations") or ()),
                   d.get("constraints"), examples)


def load_preamble(fname):
    raw = load_yaml(fname)
    if not isinstance(raw, dict):
        raise InvalidPreamble(f"{fname} does not hold a mapping.")
    try:
        return PreambleTemplate.from_dict(raw)
    except (KeyError, TypeError) as err:
        raise InvalidPreamble(f"{fname}: bad example entry ({err}).") from None


def load_preambles(directory):
    """ Every `*.yml` of `directory`, sorted by id """
    preambles = {}
    for fname in sorted(Path(directory).glob("*.yml")):
        p = load_preamble(fname)
        if p.id in preambles:
            raise DuplicatePreamble(f"Preamble id {p.id} defined twice ({fname}).")
        preambles[p.id] = p
    logger.debug("Loaded %d preambles from %s", len(preambles), directory)
    return [ preambles[i] for i in sorted(preambles) ]


def _render(p, language, input_text, examples):
    try:
        instructions = _env.from_string(p.instructions).render(language=language).strip()
        return _env.get_template(PROMPT_TEMPLATE).render(
            instructions=instructions, considerations=p.considerations,
            constraints=p.constraints, examples=examples, input_text=input_text)
    except TemplateError as err:
        raise InvalidPreamble(f"Preamble {p.id} does not render: {err}") from err


def render_prompt(p, target, input_text):
    if target == SOURCE_LANGUAGE:
        raise SourceLanguageTarget("Preamble prompts translate from English, not into it.")
    examples = [ {"input": e.input, "output": e.output_for(target)}
                 for e in p.examples if e.output_for(target) ]
    return _render(p, get_language(target).name, input_text, examples)


def render_back_translation_prompt(p, source, input_text):
    """ Same preamble, asked to bring a `source` text back to English """
    get_language(source)
    examples = [ {"input": e.output_for(source), "output": e.input}
                 for e in p.examples if e.output_for(source) ]
    return _render(p, get_language(SOURCE_LANGUAGE).name, input_text, examples)


def extract_translation(response):
    """
    Keep what follows the last `Expected Output:` anchor, up to any echoed
    header or new input.
    """
    text = response.rsplit(ANCHOR, 1)[-1]
    text = re.split(r"\n(?:#{2,3} |Input:)", text, maxsplit=1)[0]
    return text.strip()
