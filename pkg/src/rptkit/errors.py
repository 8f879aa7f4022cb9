"""Exception shared by every JSON reader: the document itself is malformed."""


class DocumentError(ValueError):
    pass
