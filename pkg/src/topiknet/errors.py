class TopiknetError(Exception):
    exit_code = 1


class ParseError(TopiknetError, ValueError):
    exit_code = 3

    def __init__(self, path, line, field, message):
        self.path, self.line, self.field = str(path), line, field
        super().__init__(f"{path}, line {line}, field {field!r}: {message}")


class EmptyVariantError(TopiknetError, ValueError):
    exit_code = 4


class EmptySelectionError(EmptyVariantError):
    pass


class EmptyNetworkError(TopiknetError, ValueError):
    exit_code = 4
