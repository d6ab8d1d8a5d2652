"""Main module for the skewer-lab command line."""

import argparse
import json
import logging
import math
import sys
from dataclasses import fields
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from tabulate import tabulate

from skewer_lab.chains import ChainError, CrpConfig, CrpParams, simulate_poissonized
from skewer_lab.database.db_manager import DatabaseError, DatabaseManager
from skewer_lab.database.models import (
    Construction,
    ExperimentConfig,
    InitialLaw,
    RunRecord,
    StatReport,
)
from skewer_lab.depoisson import DePoissonizationError, depoissonize, resampling_2tree
from skewer_lab.kernels import SamplerError, path_stream, sample_dirichlet_half, sample_pdip
from skewer_lab.partitions import PartitionError
from skewer_lab.scaffolding import ScaffoldingError, sample_clade
from skewer_lab.type2 import (
    Type2Error,
    Type2State,
    pseudo_stationary_path,
    sample_scaled_pdip,
    type2_path,
)
from skewer_lab.utils.config import ConfigError, load_config_file
from skewer_lab.utils.file_utils import (
    CHAIN_COLUMNS,
    DEPOISSON_COLUMNS,
    DIRICHLET_COLUMNS,
    PDIP_COLUMNS,
    SCAFFOLDING_COLUMNS,
    SPINDLE_COLUMNS,
    TYPE2_COLUMNS,
    write_csv,
    write_json_lines,
)
from skewer_lab.verify import VerificationError, battery_names, map_paths, run_test

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

LIBRARY_ERRORS = (
    ChainError,
    DatabaseError,
    DePoissonizationError,
    PartitionError,
    SamplerError,
    ScaffoldingError,
    Type2Error,
    VerificationError,
)

CONFIG_KEYS = tuple(f.name for f in fields(ExperimentConfig))


def _type2_sample(rng: np.random.Generator, params: Dict[str, Any]):
    """One type-2 path, de-Poissonized when asked."""
    construction = params["construction"].value
    max_level = math.inf if params["depoissonize"] else params["horizon"]
    kwargs = dict(
        scale_unit=params["scale_unit"],
        dt=params["dt"],
        dy=params["dy"],
        max_level=max_level,
        n_approx=params["n_approx"],
    )
    if params["initial"] is InitialLaw.PSEUDO_STATIONARY:
        path = pseudo_stationary_path(construction, params["gamma"], rng, **kwargs)
    else:
        beta = None
        if params["beta_mass"] is not None:
            beta = sample_scaled_pdip(params["beta_mass"], 0.5, rng, params["n_approx"])
        path = type2_path(
            construction, params["a"], params["b"], beta, rng, gamma=params["gamma"], **kwargs
        )
    if params["depoissonize"]:
        return depoissonize(path, params["du"], horizon_u=params["horizon"])
    return path


def _chain_sample(rng: np.random.Generator, params: Dict[str, Any]):
    return simulate_poissonized(params["config"], params["horizon"], rng)


def _resampling_sample(rng: np.random.Generator, params: Dict[str, Any]):
    x1, x2, x3 = params["x0"]
    initial = Type2State(x1, x2, sample_scaled_pdip(x3, 0.5, rng, params["n_approx"]))
    return resampling_2tree(
        initial,
        params["horizon"],
        params["du"],
        rng,
        scale_unit=params["scale_unit"],
        dy=params["dy"],
        n_approx=params["n_approx"],
    )


def _pdip_sample(rng: np.random.Generator, params: Dict[str, Any]):
    return sample_pdip(params["theta2"], params["n_approx"], rng)


def _clade_sample(rng: np.random.Generator, params: Dict[str, Any]):
    return sample_clade(params["x0"], params["scale_unit"], rng)


def _simplex_point(text: str) -> List[float]:
    try:
        x = [float(v) for v in text.split(",")]
    except ValueError as e:
        raise ConfigError(f"Invalid simplex point {text!r}") from e
    if len(x) != 3 or any(v < 0 for v in x) or not math.isclose(sum(x), 1.0, abs_tol=1e-6):
        raise ConfigError(f"Expected three nonnegative values summing to 1, got {text!r}")
    return x


def _parse_params(pairs: Optional[Sequence[str]]) -> Dict[str, str]:
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigError(f"Expected key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        params[key.strip().replace("-", "_")] = value.strip()
    return params


class SkewerLab:
    """Runs simulations, exports and the verification battery for one configuration."""

    def __init__(
        self,
        config: Optional[ExperimentConfig] = None,
        db_path: Optional[str] = None,
        dry_run: bool = False,
    ):
        self.config = config or ExperimentConfig()
        self.dry_run = dry_run
        self.db: Optional[DatabaseManager] = None
        if db_path:
            self.db = DatabaseManager(db_path, dry_run=dry_run)
            self.db.init_database()

    def _record_run(self, command: str, n_paths: int, output: Optional[str]) -> Optional[int]:
        if not self.db:
            return None
        record = RunRecord(
            command=command,
            config_json=json.dumps(self.config.to_mapping(), sort_keys=True),
            n_paths=n_paths,
            seed=self.config.seed,
            output_path=output or "-",
            created_at=datetime.now().isoformat(timespec="seconds"),
        )
        return self.db.store_run(record)

    def _params(self) -> Dict[str, Any]:
        return self.config.to_dict()

    def simulate_type2(self, depoissonized: bool = False) -> int:
        """Write type-2 paths (or their de-Poissonized versions) as CSV."""
        cfg = self.config
        params = {**self._params(), "depoissonize": depoissonized}
        logger.info(
            "Simulating %d %s paths (%s start)",
            cfg.paths,
            cfg.construction.value,
            cfg.initial.value,
        )
        paths = map_paths(_type2_sample, cfg.paths, cfg.seed, params)
        rows = [row for i, path in enumerate(paths) for row in path.to_rows(i)]
        if depoissonized:
            count = write_csv(cfg.out, "depoisson", DEPOISSON_COLUMNS, rows)
        else:
            count = write_csv(cfg.out, "type2", TYPE2_COLUMNS, rows)
        self._record_run("simulate type2", cfg.paths, cfg.out)
        return count

    def simulate_chain(self, tables: Sequence[int], crp_params: CrpParams) -> int:
        """Write Poissonized oCRP runs as CSV, one row per event."""
        cfg = self.config
        params = {"config": CrpConfig(tuple(tables), crp_params), "horizon": cfg.horizon}
        traces = map_paths(_chain_sample, cfg.paths, cfg.seed, params)
        rows = [(i, t, config) for i, trace in enumerate(traces) for t, config in trace.to_rows()]
        count = write_csv(cfg.out, "chain", CHAIN_COLUMNS, rows)
        self._record_run("simulate chain", cfg.paths, cfg.out)
        return count

    def simulate_resampling(self, x0: Sequence[float]) -> int:
        """Write resampling 2-tree paths as CSV."""
        cfg = self.config
        params = {**self._params(), "x0": tuple(x0)}
        paths = map_paths(_resampling_sample, cfg.paths, cfg.seed, params)
        rows = [row for i, path in enumerate(paths) for row in path.to_rows(i)]
        count = write_csv(cfg.out, "resampling", DEPOISSON_COLUMNS, rows)
        self._record_run("simulate resampling", cfg.paths, cfg.out)
        return count

    def export_pdip(self, theta2: float) -> int:
        cfg = self.config
        params = {"theta2": theta2, "n_approx": cfg.n_approx}
        samples = map_paths(_pdip_sample, cfg.paths, cfg.seed, params)
        rows = []
        for i, beta in enumerate(samples):
            div_left = beta.div_left or (0.0,) * len(beta)
            for block, (mass, d) in enumerate(zip(beta.masses, div_left)):
                rows.append((i, block, mass, d, beta.diversity))
        count = write_csv(cfg.out, "pdip", PDIP_COLUMNS, rows)
        self._record_run("export pdip", cfg.paths, cfg.out)
        return count

    def export_dirichlet(self) -> int:
        cfg = self.config
        rng = path_stream(cfg.seed, 0)
        rows = [(i, *sample_dirichlet_half(rng)) for i in range(cfg.paths)]
        count = write_csv(cfg.out, "dirichlet", DIRICHLET_COLUMNS, rows)
        self._record_run("export dirichlet", cfg.paths, cfg.out)
        return count

    def export_scaffolding(self, x0: float, spindles_out: Optional[str] = None) -> int:
        """Clade scaffoldings as CSV, and optionally every spindle path."""
        cfg = self.config
        params = {"x0": x0, "scale_unit": cfg.scale_unit}
        clades = map_paths(_clade_sample, cfg.paths, cfg.seed, params)
        rows = [(i, *row) for i, clade in enumerate(clades) for row in clade.scaffolding_rows()]
        count = write_csv(cfg.out, "scaffolding", SCAFFOLDING_COLUMNS, rows)
        if spindles_out:
            spindle_rows = [
                (i, *row) for i, clade in enumerate(clades) for row in clade.spindle_rows()
            ]
            write_csv(spindles_out, "spindles", SPINDLE_COLUMNS, spindle_rows)
        self._record_run("export scaffolding", cfg.paths, cfg.out)
        return count

    def verify(
        self,
        name: str,
        n_paths: Optional[int] = None,
        params: Optional[Dict[str, Any]] = None,
        out: Optional[str] = None,
    ) -> List[StatReport]:
        """Run one battery test or ``all`` and emit one JSON object per report."""
        names = battery_names() if name == "all" else [name]
        reports = []
        run_id = self._record_run(f"verify {name}", n_paths or 0, out)
        for test_name in names:
            report = run_test(test_name, n_paths, self.config.seed, params)
            reports.append(report)
            if self.db:
                self.db.store_report(report, run_id)
        objects = [report.to_dict() for report in reports]
        if out in (None, "-"):
            write_json_lines(sys.stdout, objects)
        else:
            try:
                with open(out, "w", encoding="utf-8") as handle:
                    write_json_lines(handle, objects)
            except OSError as e:
                raise ConfigError(f"Cannot write reports to {out}: {e}") from e
        return reports

    def report(self, test_name: Optional[str] = None) -> int:
        """Print stored reports as a table."""
        if not self.db:
            raise ConfigError("report needs --db")
        reports = self.db.get_reports(test_name)
        if not reports:
            print("No reports stored.")
            return 0
        table = [
            {
                "test": r.test_name,
                "statistic": f"{r.statistic:.5g}",
                "reference": f"{r.reference:.5g}",
                "tolerance": f"{r.tolerance:.5g}",
                "pass": "yes" if r.passed else "NO",
                "paths": r.n_paths,
                "seed": r.seed,
                "seconds": f"{r.runtime_seconds:.1f}",
            }
            for r in reports
        ]
        print(tabulate(table, headers="keys", tablefmt="psql"))
        return len(reports)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--paths", type=int, help="Number of independent paths")
    parser.add_argument("--seed", type=int, help="Root seed")
    parser.add_argument("--out", type=str, help="Output file (default stdout)")
    parser.add_argument("--db", type=str, help="Results database to record the run in")


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scale-unit", type=float, help="Mass of one customer (1/n)")
    parser.add_argument("--dt", type=float, help="Euler step for BESQ paths")
    parser.add_argument("--dy", type=float, help="Level grid spacing of recorded paths")
    parser.add_argument("--du", type=float, help="Time grid spacing after de-Poissonization")
    parser.add_argument("--horizon", type=float, help="Last level (or time) to record")
    parser.add_argument("--n-approx", type=int, help="Customers used to approximate a PDIP")


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog="skewer-lab", description="Interval-partition evolutions and their verification"
    )

    # Global arguments
    parser.add_argument("--config", type=str, help="Flat key=value configuration file")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument(
        "--dry-run", action="store_true", help="Print database statements instead of running them"
    )

    subparsers = parser.add_subparsers(dest="command", help="Commands", required=True)

    # Simulate command
    simulate_parser = subparsers.add_parser("simulate", help="Simulate paths as CSV")
    simulate_sub = simulate_parser.add_subparsers(
        dest="target", help="What to simulate", required=True
    )

    type2_parser = simulate_sub.add_parser("type2", help="Type-2 evolutions")
    type2_parser.add_argument(
        "--construction", choices=[c.value for c in Construction], help="Type-2 construction"
    )
    type2_parser.add_argument(
        "--initial", choices=[i.value for i in InitialLaw], help="Initial state law"
    )
    type2_parser.add_argument("--a", type=float, help="Initial mass of the first top")
    type2_parser.add_argument("--b", type=float, help="Initial mass of the second top")
    type2_parser.add_argument(
        "--beta-mass", type=float, help="Mass of the initial partition, spread as a PDIP(1/2, 1/2)"
    )
    type2_parser.add_argument("--gamma", type=float, help="Rate of the pseudo-stationary start")
    type2_parser.add_argument(
        "--depoissonize", action="store_true", help="Normalize and time-change every path"
    )
    _add_model_options(type2_parser)
    _add_run_options(type2_parser)

    chain_parser = simulate_sub.add_parser("chain", help="Poissonized ordered CRP chains")
    chain_parser.add_argument("--tables", type=str, default="2,1", help="Initial tables, e.g. 2,1")
    chain_parser.add_argument(
        "--crp-params",
        choices=[p.value for p in CrpParams],
        default=CrpParams.HALF_ZERO.value,
        help="(alpha, theta) of the chain",
    )
    chain_parser.add_argument("--horizon", type=float, help="Time horizon")
    _add_run_options(chain_parser)

    resampling_parser = simulate_sub.add_parser("resampling", help="Resampling 2-tree evolution")
    resampling_parser.add_argument(
        "--x0", type=str, default="0.9,0.05,0.05", help="Initial masses summing to 1"
    )
    _add_model_options(resampling_parser)
    _add_run_options(resampling_parser)

    # Verify command
    verify_parser = subparsers.add_parser("verify", help="Run battery tests")
    verify_parser.add_argument("test", nargs="?", default="all", help="Test name or 'all'")
    verify_parser.add_argument(
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="Test parameter, repeatable",
    )
    verify_parser.add_argument("--list", action="store_true", help="List test names and exit")
    _add_run_options(verify_parser)

    # Export command
    export_parser = subparsers.add_parser("export", help="Dump sampler outputs as CSV")
    export_parser.add_argument("what", choices=["pdip", "dirichlet", "scaffolding"])
    export_parser.add_argument("--theta2", type=float, default=0.5, help="PDIP(1/2, theta2)")
    export_parser.add_argument("--x0", type=float, default=1.0, help="Initial clade mass")
    export_parser.add_argument("--spindles-out", type=str, help="Also write every spindle path")
    export_parser.add_argument("--scale-unit", type=float, help="Mass of one customer (1/n)")
    export_parser.add_argument("--n-approx", type=int, help="Customers used to approximate a PDIP")
    _add_run_options(export_parser)

    # Report command
    report_parser = subparsers.add_parser("report", help="List stored battery reports")
    report_parser.add_argument("--db", type=str, default="skewer_lab.db", help="Results database")
    report_parser.add_argument("--test", type=str, help="Only this test")

    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then the config file, then command-line flags."""
    config = ExperimentConfig()
    if args.config:
        config = config.merged(load_config_file(args.config))
    overrides = {key: getattr(args, key, None) for key in CONFIG_KEYS if key != "command"}
    overrides["command"] = args.command
    return config.merged(overrides)


def _run(args: argparse.Namespace) -> int:
    config = build_config(args)
    lab = SkewerLab(config, db_path=getattr(args, "db", None), dry_run=args.dry_run)

    if args.command == "simulate":
        if args.target == "type2":
            lab.simulate_type2(depoissonized=args.depoissonize)
        elif args.target == "chain":
            tables = [int(m) for m in args.tables.split(",") if m.strip()]
            lab.simulate_chain(tables, CrpParams(args.crp_params))
        else:
            lab.simulate_resampling(_simplex_point(args.x0))
        return EXIT_OK

    if args.command == "verify":
        if args.list:
            print("\n".join(battery_names()))
            return EXIT_OK
        reports = lab.verify(args.test, args.paths, _parse_params(args.param), config.out)
        failed = [r.test_name for r in reports if not r.passed]
        if failed:
            logger.warning("Failed tests: %s", ", ".join(failed))
            return EXIT_FAILED
        return EXIT_OK

    if args.command == "export":
        if args.what == "pdip":
            lab.export_pdip(args.theta2)
        elif args.what == "dirichlet":
            lab.export_dirichlet()
        else:
            lab.export_scaffolding(args.x0, args.spindles_out)
        return EXIT_OK

    lab.report(args.test)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the skewer-lab CLI."""
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return _run(args)
    except ConfigError as e:
        logger.error("Configuration error: %s", e)
        return EXIT_ERROR
    except LIBRARY_ERRORS as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
