from prompt_eval.core import (DuplicatePreamble, EmptyReport, InvalidPreamble, MissingReference,
                              PromptEvalError, SourceLanguageTarget)
from prompt_eval.evaluation import (EvalPair, PreambleReport, build_eval_dataset,
                                    evaluate_preambles, export_radar_data, load_report,
                                    save_report, select_best_preamble, summarize_report)
from prompt_eval.references import draft_references, read_references, write_references
from prompt_eval.templates import (Example, PreambleTemplate, extract_translation,
                                   load_preamble, load_preambles,
                                   render_back_translation_prompt, render_prompt)
