from corpus.languages import SOURCE_LANGUAGE, get_language



def tokenize(text, language=SOURCE_LANGUAGE, fold_case=False):
    """
    Whitespace split for space-delimited languages, one token per non-space
    character for languages written without spaces (zh, ja).
    Tokens are compared case-sensitively unless `fold_case`.
    """
    if fold_case:
        text = text.casefold()
    if get_language(language).unsegmented:
        return [ ch for ch in text if not ch.isspace() ]
    return text.split()
