from textmetrics.accumulators import OrderedBleu
from textmetrics.bleu import (BleuScore, Precision, bleu, bleu_per_order, corpus_bleu,
                              modified_precision)
from textmetrics.core import EmptyText, InvalidOrder, MetricError, NoReferences
from textmetrics.ngrams import NgramProfile, ngram_counts
from textmetrics.readability import (ReadabilityReport, count_syllables, length_analysis,
                                     readability, split_sentences)
from textmetrics.tokenize import tokenize
