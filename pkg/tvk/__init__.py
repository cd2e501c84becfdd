# tvk, Copyright (C) 2026 the tvk developers. Licensed under the GPLv2 or later.
#
# This program is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; version 2.
#
# This program is distributed in the hope that it will be useful, but
# WITHOUT ANY WARRANTY; without even the implied warranty of MERCHANTABILITY
# or FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public License
# for more details.
#
# You should have received a copy of the GNU General Public License along
# with this program; if not, write to the Free Software Foundation, Inc.,
# 51 Franklin Street, Fifth Floor, Boston, MA 02110-1301, USA.

"""Expands lambda values of level-four multiple polylogarithms into multiple T~ values
and verifies the resulting identities numerically.
"""
import logging
from functools import cached_property, partial
from typing import Any, Dict, List, Optional

import confuse
from mpmath import mp
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ._cache import ValueCache
from ._checks import (
    CHECKS,
    EXIT_CODES,
    CheckContext,
    CheckReport,
    UnknownCheckError,
    Verifier,
    available_tags,
)
from ._expansion import closed_form, expand_A, lambda_expansion
from ._helpers import JSONDict, LoggingHandler
from ._index import InvalidIndexError, dual_index, parse_index, shuffle_product
from ._numerics import BigComplex, NonConvergenceError, ttilde
from ._oracle import ORACLE_DIGITS, lambda_quadrature

__all__ = ["DEFAULT_CONFIG", "TvkCommand", "get_args", "main"]

DEFAULT_CONFIG: JSONDict = {
    "digits": 30,
    "tolerance": 1e-20,
    "duality_tolerance": 1e-18,
    "oracle_tolerance": 1e-10,
    "quadrature_tolerance": 1e-8,
    "max_outer_terms": 20000,
    "acceleration_order": None,
    "weight_max": 5,
    "jobs": 1,
    "cache_dir": None,
    "verbose": False,
}
STATUS_STYLES = {
    "pass": "green",
    "ambiguous": "yellow",
    "fail": "bold red",
    "error": "red",
}


def load_config(args: Any = None, path: Optional[str] = None) -> JSONDict:
    """Layer the defaults, an optional config file, TVK_* environment variables and
    the command line flags, later sources winning.
    """
    config = confuse.Configuration("tvk", read=False)
    if path:
        config.set_file(path)
    config.set_env(prefix="TVK_")
    if args is not None:
        config.set_args(args)
    config.add(DEFAULT_CONFIG)
    return config.flatten()


def setup_logging(verbose: bool, console: Optional[Console] = None) -> None:
    logger = logging.getLogger("tvk")
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(console=console or Console(stderr=True), show_path=False)
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


class TvkCommand(LoggingHandler):
    """Runs one subcommand against a flattened configuration."""

    def __init__(self, config: JSONDict, console: Optional[Console] = None) -> None:
        self.config = config
        self.console = console or Console()

    @cached_property
    def context(self) -> CheckContext:
        return CheckContext.from_config(self.config)

    @cached_property
    def cache(self) -> Optional[ValueCache]:
        return self.context.values.cache

    def _print(self, data: Any, as_json: bool) -> None:
        if as_json:
            import json

            self.console.print_json(json.dumps(data))
        else:
            self.console.print(data)

    def _value(self, value: BigComplex) -> JSONDict:
        digits = self.context.digits
        return {
            "value": value.render(digits),
            "err": mp.nstr(value.err, 3),
            "digits": digits,
        }

    def ttilde(self, args: Any) -> int:
        index = parse_index(args.index)
        if self.cache is None:
            value = ttilde(index, self.context.policy)
        else:
            value = self.context.values[index]
        self._print({"index": list(index), **self._value(value)}, args.json)
        return EXIT_CODES["pass"]

    def lambda_(self, args: Any) -> int:
        index, s = parse_index(args.index), args.s
        if args.method == "quadrature":
            value = self.context.cached(
                "lambda", index, lambda: lambda_quadrature(index, s, self.context.policy),
                min(self.context.digits, ORACLE_DIGITS), s=s, method="quadrature",
            )
        else:
            if args.method == "expansion":
                combination = lambda_expansion(index)
            else:
                combination = closed_form(index)
            self._info("lambda(%s; s) = %s", index, combination)
            value = self.context.evaluate(combination, s)
        data = {"index": list(index), "s": s, "method": args.method}
        self._print({**data, **self._value(value)}, args.json)
        return EXIT_CODES["pass"]

    def expand(self, args: Any) -> int:
        index = parse_index(args.index)
        combination = lambda_expansion(index)
        if args.json:
            terms = [t._asdict() for t in expand_A(index)]
            for term in terms:
                term.update(
                    c=str(term["c"]),
                    P=[list(p) for p in term["P"]],
                    residual=list(term["residual"]),
                )
            data = {"index": list(index), "terms": terms, "lambda": combination.to_json()}
            self._print(data, True)
            return EXIT_CODES["pass"]

        table = Table("c", "e", "P", "j", "k'", title=f"A({index}; (1+z)/(1-z))")
        for term in expand_A(index):
            P = " ".join(f"({p})" for p in term.P) or "∅"
            table.add_row(str(term.c), str(term.e), P, str(term.j), f"({term.residual})")
        self.console.print(table)
        self.console.print(f"λ({index}; s) = {combination}")
        return EXIT_CODES["pass"]

    def dual(self, args: Any) -> int:
        index = parse_index(args.index)
        self._print({"index": list(index), "dual": list(dual_index(index))}, args.json)
        return EXIT_CODES["pass"]

    def shuffle(self, args: Any) -> int:
        u, v = parse_index(args.first), parse_index(args.second)
        product = shuffle_product(u, v)
        if args.json:
            data = [{"index": list(w), "coefficient": c} for w, c in product.items()]
            self._print(data, True)
        else:
            self.console.print(f"({u}) ш ({v}) = {product}")
        return EXIT_CODES["pass"]

    def verify(self, args: Any) -> int:
        verifier = Verifier(self.context)
        reports, summary = verifier.run_suite(
            check_ids=args.check,
            tags=args.tag,
            weight_max=int(self.config["weight_max"]),
            jobs=int(self.config["jobs"]),
        )
        if args.json:
            data = {"reports": [r.to_json() for r in reports], "summary": summary}
            self._print(data, True)
        else:
            self.console.print(self._report_table(reports))
            self.console.print(", ".join(f"{k}: {v}" for k, v in summary.items()))
        return summary["exit_code"]

    @staticmethod
    def _report_table(reports: List[CheckReport]) -> Table:
        table = Table("check", "params", "status", "abs err", "tol", "seconds")
        for report in reports:
            status = report.status + (f" ({report.winner})" if report.winner else "")
            table.add_row(
                report.check_id,
                ", ".join(f"{k}={v}" for k, v in report.params.items()),
                f"[{STATUS_STYLES[report.status]}]{status}",
                report.abs_err or report.message or "",
                report.tol,
                f"{report.seconds:.2f}",
            )
        return table

    def cache_(self, args: Any) -> int:
        if self.cache is None:
            self._info("No cache directory configured")
            self.console.print(
                "no cache directory configured (--cache-dir or TVK_CACHE_DIR)"
            )
            return EXIT_CODES["usage"]
        if args.action == "clear":
            self._print({"removed": self.cache.clear()}, args.json)
        else:
            self._print(self.cache.stats(), args.json)
        return EXIT_CODES["pass"]

    def run(self, args: Any) -> int:
        handlers = {
            "ttilde": self.ttilde,
            "lambda": self.lambda_,
            "expand": self.expand,
            "dual": self.dual,
            "shuffle": self.shuffle,
            "verify": self.verify,
            "cache": self.cache_,
        }
        try:
            return handlers[args.command](args)
        except (InvalidIndexError, UnknownCheckError) as exc:
            self._info("Usage error: %s", exc)
            self.console.print(f"[red]error:[/] {exc}")
            return EXIT_CODES["usage"]
        except NonConvergenceError as exc:
            self._exc("Numerical evaluation failed")
            if exc.best is not None:
                best = exc.best.render(self.context.digits)
                self.console.print(f"best estimate: {best}")
            return EXIT_CODES["numeric"]
        except ValueError as exc:
            self._info("Invalid request: %s", exc)
            self.console.print(f"[red]error:[/] {exc}")
            return EXIT_CODES["usage"]


def get_args(args: List[str]) -> Any:
    from argparse import ArgumentParser

    common = ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or YAML configuration file")
    common.add_argument(
        "--cache-dir", dest="cache_dir", help="Directory of the value cache"
    )
    common.add_argument("--digits", type=int, help="Target significant digits")
    common.add_argument(
        "-v", "--verbose", action="store_true", default=None, help="Debug logs"
    )
    common.add_argument(
        "--json", action="store_true", help="Print machine-readable output"
    )

    parser = ArgumentParser(
        prog="tvk",
        description="""Expand lambda values of level-four multiple polylogarithms into
multiple T~ values and verify the identities between them.

Indices are comma-separated positive integers, innermost entry first: 1,2 or 3.
""",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="<command>")
    command = partial(subparsers.add_parser, parents=[common])

    ttilde_parser = command("ttilde", help="Evaluate T~(index) by series")
    ttilde_parser.add_argument("index", help="Index, for example 1,3")

    lambda_parser = command("lambda", help="Evaluate lambda(index; s)")
    lambda_parser.add_argument("index", help="Index, for example 2,1")
    lambda_parser.add_argument("--s", type=int, required=True, help="Integer s ≥ 2")
    lambda_parser.add_argument(
        "--method", choices=["expansion", "closed", "quadrature"], default="expansion"
    )

    expand_parser = command(
        "expand", help="Show the expansion of A(index) and lambda(index; s)"
    )
    expand_parser.add_argument("index")

    dual_parser = command("dual", help="Print the dual index")
    dual_parser.add_argument("index")

    shuffle_parser = command("shuffle", help="Shuffle product of two indices")
    shuffle_parser.add_argument("first")
    shuffle_parser.add_argument("second")

    verify_parser = command("verify", help="Run verification checks")
    verify_parser.add_argument(
        "--check", action="append", choices=sorted(CHECKS), help="Check id, repeatable"
    )
    verify_parser.add_argument("--tag", action="append", choices=available_tags())
    verify_parser.add_argument("--weight-max", dest="weight_max", type=int)
    verify_parser.add_argument("--jobs", type=int, help="Parallel worker processes")

    cache_parser = command("cache", help="Inspect or clear the value cache")
    cache_parser.add_argument("action", choices=["stats", "clear"])

    if not args:
        parser.print_help()
        parser.exit()
    return parser.parse_args(args=args)


def main(argv: Optional[List[str]] = None) -> int:
    import sys

    args = get_args(sys.argv[1:] if argv is None else argv)
    overrides: Dict[str, Any] = {
        k: v for k, v in vars(args).items() if k in DEFAULT_CONFIG and v is not None
    }
    config = load_config(overrides, args.config)
    setup_logging(bool(config["verbose"]))
    return TvkCommand(config).run(args)


if __name__ == "__main__":
    raise SystemExit(main())
