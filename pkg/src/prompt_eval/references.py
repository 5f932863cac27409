"""
Drafting the reference set of the tournament: the selected English payloads go
through forward and back translation, and every draft that does not pass the
gate is queued for a human reviewer.
"""
import logging

from pathlib import Path

import yaml

from translation.core import TranslationError, VerificationUnavailable
from translation.verification import DEFAULT_THETA, translate_with_verification



logger = logging.getLogger(__name__)


def _queue_entry(sample_id, language, verdict, forward=None, back=None, gate_bleu=None,
                 issues=(), error=None):
    return {"sample_id": sample_id, "language": language, "verdict": verdict,
            "gate_bleu": gate_bleu, "issues": list(issues), "forward": forward,
            "back": back, "error": error}


def draft_references(selection, languages, provider, theta=DEFAULT_THETA, preamble_id=0,
                     retry=None):
    """
    Returns ({language: {sample_id: draft}}, review queue). Drafts that need
    review still appear in the references, so the reviewer edits in place.
    """
    references, queue = {}, []
    for lang in languages:
        drafts = references.setdefault(lang, {})
        for entry in selection.entries:
            sid = entry.sample_id
            try:
                vt = translate_with_verification(entry.text, lang, provider, theta,
                                                 preamble_id, retry=retry)
            except VerificationUnavailable as err:
                drafts[sid] = err.forward.text
                queue.append(_queue_entry(sid, lang, "verification_unavailable",
                                          forward=err.forward.text, error=str(err)))
                continue
            except TranslationError as err:
                logger.warning("No %s draft for sample %s: %s", lang, sid, err)
                queue.append(_queue_entry(sid, lang, "failed", error=type(err).__name__))
                continue
            drafts[sid] = vt.forward.text
            if vt.needs_review:
                queue.append(_queue_entry(sid, lang, vt.verdict.value, vt.forward.text,
                                          vt.back.text, vt.gate_bleu, vt.issues))
    logger.info("Drafted references for %d language(s), %d item(s) to review",
                len(references), len(queue))
    return references, queue


def write_references(references, fname):
    fname = Path(fname)
    fname.parent.mkdir(parents=True, exist_ok=True)
    with open(fname, 'w') as fd:
        yaml.safe_dump(references, fd, sort_keys=False, allow_unicode=True)
    return fname


def read_references(fname):
    with open(fname, 'r') as fd:
        raw = yaml.safe_load(fd) or {}
    return { str(lang): { str(sid): str(text) for sid, text in (refs or {}).items() }
             for lang, refs in raw.items() }
