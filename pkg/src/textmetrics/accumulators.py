""" Stateful metrics: feed pairs with `update`, aggregate with `compute` """
import statistics

from textmetrics.bleu import bleu_per_order



class OrderedBleu:
    """ BLEU-1..BLEU-N collected over several pairs """
    def __init__(self, max_n=4, reduction="mean", smooth=False):
        self.max_n = max_n
        self.reduction = reduction
        self.smooth = smooth
        self.reset()

    def reset(self):
        self.scores = []

    def update(self, candidate, references):
        val = bleu_per_order(candidate, references, self.max_n, self.smooth)
        self.scores.append(val)
        return val

    def __len__(self):
        return len(self.scores)

    def compute(self):
        if not self.scores:
            return None
        if self.reduction == "mean":
            return [ statistics.fmean(s[n] for s in self.scores) for n in range(self.max_n) ]
        if self.reduction == "none" or self.reduction is None:
            return [ list(s) for s in self.scores ]
        raise ValueError(f"Unknown reduction {self.reduction}, use 'mean' or 'none'.")
