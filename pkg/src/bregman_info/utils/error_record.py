from bregman_info.constants import EXIT_INPUT_ERROR


class ErrorRecord:
    def __init__(self, kind, error_message, exit_code=EXIT_INPUT_ERROR):
        self.kind = kind
        self.error_message = error_message
        self.exit_code = exit_code

    def to_dict(self):
        return {
            "error": {
                "kind": self.kind,
                "message": self.error_message,
                "exit_code": self.exit_code
            }
        }
