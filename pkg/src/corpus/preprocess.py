from collections import Counter
from dataclasses import dataclass, field, replace



@dataclass
class DatasetStats:
    samples: int = 0
    turns: int = 0
    assistant_turns: int = 0
    with_image_marker: int = 0
    anomalies: dict = field(default_factory=dict)

    def to_dict(self):
        return {"samples": self.samples, "turns": self.turns,
                "assistant_turns": self.assistant_turns,
                "with_image_marker": self.with_image_marker,
                "anomalies": self.anomalies}


def dataset_stats(samples):
    """ Counts plus the per-field oddities worth a look before translating """
    stats = DatasetStats(samples=len(samples))
    images = Counter(s.image for s in samples)
    empty, multi = [], []
    for s in samples:
        stats.turns += len(s.turns)
        nbassist = len(s.assistant_indexes)
        stats.assistant_turns += nbassist
        if any(t.image_marker is not None for t in s.turns):
            stats.with_image_marker += 1
        if any(t.is_assistant and not t.text.strip() for t in s.turns):
            empty.append(s.id)
        if nbassist > 1:
            multi.append(s.id)
    stats.anomalies = {"empty_assistant_text": empty,
                       "multi_turn": multi,
                       "repeated_image": sorted(i for i, c in images.items() if c > 1),
                       "without_image_marker": stats.samples - stats.with_image_marker}
    return stats


def apply_translations(sample, language, texts):
    """ Copy of `sample` in `language`, assistant turns replaced by `texts[turn_index]` """
    turns = list(sample.turns)
    for i, text in texts.items():
        turn = turns[i]
        if not turn.is_assistant:
            raise ValueError(f"Turn {i} of {sample.id} is not an assistant turn.")
        marker = turn.image_marker
        if marker:
            # Keep the image at the end if it was there, clamp otherwise
            marker = len(text) if marker == len(turn.text) else min(marker, len(text))
        turns[i] = replace(turn, text=text, image_marker=marker)
    return replace(sample, turns=tuple(turns), language=language)
