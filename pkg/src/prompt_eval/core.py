class PromptEvalError(Exception):
    pass

class InvalidPreamble(PromptEvalError, ValueError):
    pass

class DuplicatePreamble(PromptEvalError, ValueError):
    pass

class SourceLanguageTarget(PromptEvalError, ValueError):
    """ Prompts translate out of English, never into it """

class MissingReference(PromptEvalError, LookupError):
    def __init__(self, sample_id, language):
        super(MissingReference, self).__init__(f"No {language} reference for sample {sample_id}.")
        self.sample_id = sample_id
        self.language = language

class EmptyReport(PromptEvalError, ValueError):
    pass
