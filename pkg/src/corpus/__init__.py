from corpus.core import (IMAGE_TOKEN, AssistantPayload, CorpusError, DuplicateId,
                         MalformedInput, Sample, SchemaViolation, SinkFailure, Speaker, Turn)
from corpus.languages import (BUILTIN_LANGUAGES, SOURCE_LANGUAGE, TARGET_LANGUAGES,
                              Language, UnknownLanguage, check_targets, get_language,
                              register_language)
from corpus.loaders import (dataset_path, dump_dataset, extract_assistant_payloads,
                            load_dataset, parse_dataset, save_dataset, write_dataset)
from corpus.preprocess import DatasetStats, apply_translations, dataset_stats
