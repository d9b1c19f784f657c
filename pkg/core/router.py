import argparse
from typing import Any, Callable, Dict, List, Optional, Tuple

Endpoint = Callable[[argparse.Namespace], int]


class CommandRouter:
    """Collects the flags and the handler of one subcommand until it is mounted."""

    def __init__(self, name: str, help: str, description: Optional[str] = None):
        self.name = name
        self.help = help
        self.description = description or help
        self.endpoint: Optional[Endpoint] = None
        self._arguments: List[Tuple[Tuple[str, ...], Dict[str, Any]]] = []

    def argument(self, *flags: str, **kwargs: Any) -> "CommandRouter":
        self._arguments.append((flags, kwargs))
        return self

    def command(self) -> Callable[[Endpoint], Endpoint]:
        def decorator(fn: Endpoint) -> Endpoint:
            self.endpoint = fn
            return fn
        return decorator

    def mount(self, subparsers: "argparse._SubParsersAction", parents: Optional[List[argparse.ArgumentParser]] = None) -> argparse.ArgumentParser:
        if self.endpoint is None:
            raise RuntimeError(f"Command '{self.name}' has no handler")
        parser = subparsers.add_parser(
            self.name,
            help=self.help,
            description=self.description,
            parents=parents or [],
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        for flags, kwargs in self._arguments:
            parser.add_argument(*flags, **kwargs)
        parser.set_defaults(endpoint=self.endpoint, command=self.name)
        return parser
