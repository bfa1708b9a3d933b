#!/usr/bin/env python3
#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Command-line interface for the vmi2stro package"""

from typing import Optional, Sequence, TextIO, Dict, Any

import os
import sys
import argparse
import argcomplete # type: ignore[import]
import json
import logging
import math
import colorama # type: ignore[import]
from colorama import Fore, Style
from dataclasses import replace

# NOTE: this module runs with -m; do not use relative imports
from vmi2stro import __version__ as pkg_version
from vmi2stro.config import Config
from vmi2stro.exceptions import ConfigError
from vmi2stro.harness import (
    ExperimentSpec,
    ExperimentResult,
    SOLVER_IDS,
    run_experiment,
    emit_csv,
    emit_trace_csv,
    variance_gap_correlation,
  )
from vmi2stro.problems import PROBLEM_IDS, load_graph, cycle_graph, maxcut_bruteforce

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

def is_colorizable(stream: TextIO) -> bool:
  is_a_tty = hasattr(stream, 'isatty') and stream.isatty()
  return is_a_tty

class CmdExitError(RuntimeError):
  exit_code: int

  def __init__(self, exit_code: int, msg: Optional[str]=None):
    if msg is None:
      msg = f"Command exited with return code {exit_code}"
    super().__init__(msg)
    self.exit_code = exit_code

class ArgparseExitError(CmdExitError):
  pass

class NoExitArgumentParser(argparse.ArgumentParser):
  def exit(self, status=0, message=None):
    if message:
        self._print_message(message, sys.stderr)
    raise ArgparseExitError(status, message)

class CommandHandler:
  _argv: Optional[Sequence[str]]
  _parser: argparse.ArgumentParser
  _args: argparse.Namespace
  _cwd: str
  _colorize_stdout: bool = False
  _colorize_stderr: bool = False

  def __init__(self, argv: Optional[Sequence[str]]=None):
    self._argv = argv

  def ocolor(self, codes: str) -> str:
    return codes if self._colorize_stdout else ""

  def ecolor(self, codes: str) -> str:
    return codes if self._colorize_stderr else ""

  def abspath(self, path: str) -> str:
    return os.path.abspath(os.path.join(self._cwd, os.path.expanduser(path)))

  def pretty_print(self, value: Any):
    text = json.dumps(value, indent=2, sort_keys=True)
    sys.stdout.write(f"{self.ocolor(Fore.GREEN)}{text}{self.ocolor(Style.RESET_ALL)}\n")

  def get_spec(self) -> ExperimentSpec:
    """Builds the experiment from the command line, with --config applied first"""
    args = self._args
    spec = ExperimentSpec(
        problem_id=args.problem,
        solver_id=args.solver,
        c_n=args.cn,
        c_s=args.cs,
        budget=args.budget,
        reps=args.reps,
        seed=args.seed,
        grid_points=args.grid_points,
        graph_path=None if args.graph is None else self.abspath(args.graph),
        cycle_vertices=args.cycle,
        depth=args.depth,
      )
    if not args.config is None:
      cfg = Config().load_file(self.abspath(args.config))
      updated = cfg.apply_to(
          { "solver": spec.solver, "sampling": spec.solver.sampling, "neldermead": spec.neldermead, "spsa": spec.spsa },
          extra_keys=("noise_scale", "x0"))
      solver = replace(updated["solver"], sampling=updated["sampling"])
      spec = replace(spec, solver=solver, neldermead=updated["neldermead"], spsa=updated["spsa"])
      if "delta_0" in cfg or "solver.delta_0" in cfg:
        spec.delta_0 = solver.delta_0
      extra: Dict[str, str] = updated["extra"]
      if "noise_scale" in extra:
        spec.noise_scale = cfg.get_cfg_property_float("noise_scale")
      if "x0" in extra:
        spec.x0 = cfg.get_cfg_property_floats("x0")
    if not args.noise_scale is None:
      spec.noise_scale = args.noise_scale
    if not args.x0 is None:
      try:
        spec.x0 = tuple(float(v) for v in args.x0.split(',') if v.strip() != '')
      except ValueError as ex:
        raise ConfigError(f"--x0: expected comma-separated reals, got '{args.x0}'") from ex
    spec.solver.validate()
    spec.neldermead.validate()
    spec.spsa.validate()
    return spec.validate()

  def summarize(self, result: ExperimentResult) -> Dict[str, Any]:
    curve = result.curve
    lo, hi = curve.confidence_interval("true_value")
    terminal = curve.mean("true_value")[-1]
    gap = curve.mean("gap")[-1]
    return {
        "problem": result.spec.problem_id,
        "solver": result.spec.solver_id,
        "reps": curve.reps,
        "budget": float(curve.grid[-1]),
        "mean_terminal_true_value": float(terminal),
        "terminal_ci": [float(lo[-1]), float(hi[-1])],
        "mean_terminal_gap": None if math.isnan(gap) else float(gap),
      }

  def cmd_bare(self) -> int:
    print("A command is required", file=sys.stderr)
    return 1

  def cmd_run(self) -> int:
    args = self._args
    spec = self.get_spec()
    result = run_experiment(spec, workers=args.workers)
    out = self.abspath(args.out)
    emit_csv(result.curve, out)
    summary = self.summarize(result)
    summary["out"] = out
    self.pretty_print(summary)
    return 0

  def cmd_trace(self) -> int:
    args = self._args
    spec = self.get_spec()
    result = run_experiment(spec, workers=args.workers)
    out = self.abspath(args.out)
    emit_trace_csv(result.replications, out)
    correlations = [variance_gap_correlation(r.trace) for r in result.replications]
    summary = self.summarize(result)
    summary["out"] = out
    summary["variance_gap_correlation"] = [None if math.isnan(c) else c for c in correlations]
    self.pretty_print(summary)
    return 0

  def cmd_maxcut(self) -> int:
    args = self._args
    if not args.graph is None:
      graph = load_graph(self.abspath(args.graph))
    elif not args.cycle is None:
      graph = cycle_graph(args.cycle)
    else:
      raise ConfigError("maxcut: one of --graph or --cycle is required")
    value, bitstring = maxcut_bruteforce(graph)
    self.pretty_print({ "maxcut": value, "bitstring": bitstring })
    return 0

  def cmd_version(self) -> int:
    self.pretty_print(pkg_version)
    return 0

  def add_experiment_args(self, p: argparse.ArgumentParser):
    p.add_argument('--problem', default='himmelblau', choices=PROBLEM_IDS,
                        help='The test problem. Default is himmelblau')
    p.add_argument('--solver', default='vmi3', choices=SOLVER_IDS,
                        help='''The solver: vmi1, vmi2, vmi3 (two-stage strategies with the variance model),
                                astrodf (streaming sampling, no variance model), neldermead or spsa. Default is vmi3''')
    p.add_argument('--cn', type=float, default=0.0,
                        help='Cost per communication c_n. Default is 0')
    p.add_argument('--cs', type=float, default=1.0,
                        help='Cost per shot c_s. Default is 1')
    p.add_argument('--budget', type=float, default=3000.0,
                        help='Total cost budget c_n*Q_n + c_s*W_s per replication. Default is 3000')
    p.add_argument('--reps', type=int, default=20,
                        help='Number of macro-replications. Default is 20')
    p.add_argument('--seed', type=int, default=0,
                        help='Base seed. Default is 0')
    p.add_argument('--grid-points', type=int, default=200,
                        help='Number of budget grid points in the progress curve. Default is 200')
    p.add_argument('--graph', default=None,
                        help='QAOA graph edge-list file ("n m" then m lines "u v")')
    p.add_argument('--cycle', type=int, default=None,
                        help='Use the cycle graph on this many vertices for QAOA. Default is 5')
    p.add_argument('--depth', type=int, default=None,
                        help='QAOA depth p. Default is 5')
    p.add_argument('--noise-scale', type=float, default=None,
                        help='Himmelblau variance scale a (sphere: constant noise variance)')
    p.add_argument('--x0', default=None,
                        help='Comma-separated start point. Default is the problem\'s start')
    p.add_argument('--workers', type=int, default=1,
                        help='Run replications in a pool of this many processes. Default is 1')
    p.add_argument('--config', default=None,
                        help='A "key = value" file overriding solver, sampling and baseline parameters')
    p.add_argument('-o', '--out', required=True,
                        help='Output CSV file')

  def run(self) -> int:
    """Run the vmi2stro command-line tool with provided arguments

    Args:
        argv (Optional[Sequence[str]], optional):
            A list of commandline arguments (NOT including the program as argv[0]!),
            or None to use sys.argv[1:]. Defaults to None.

    Returns:
        int: The exit code that would be returned if this were run as a standalone command.
    """
    parser = NoExitArgumentParser(prog="vmi2stro", description="Variance-model-informed stochastic trust-region experiments.")

    # ======================= Main command

    self._parser = parser
    parser.add_argument('--traceback', "--tb", action='store_true', default=False,
                        help='Display detailed exception information')
    parser.add_argument('-M', '--monochrome', action='store_true', default=False,
                        help='Output to stdout/stderr in monochrome. Default is to colorize if stream is a compatible terminal')
    parser.add_argument('--log-level', default='WARNING', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level. Default is WARNING')
    parser.add_argument('-C', '--cwd', default='.',
                        help="Change the effective directory used to resolve relative paths")
    parser.set_defaults(func=self.cmd_bare)

    subparsers = parser.add_subparsers(
                        title='Commands',
                        description='Valid commands',
                        help='Additional help available with "<command-name> -h"')

    # ======================= run

    parser_run = subparsers.add_parser('run',
                        description='''Run macro-replications of one solver on one problem and write the
                                       budget-grid progress curve as CSV.''')
    self.add_experiment_args(parser_run)
    parser_run.set_defaults(func=self.cmd_run)

    # ======================= trace

    parser_trace = subparsers.add_parser('trace',
                        description='''Run macro-replications and write every recorded incumbent with its
                                       exact mean, exact variance and optimality gap as CSV.''')
    self.add_experiment_args(parser_trace)
    parser_trace.set_defaults(func=self.cmd_trace)

    # ======================= maxcut

    parser_maxcut = subparsers.add_parser('maxcut',
                        description='Compute the maximum cut of a graph by enumeration.')
    parser_maxcut.add_argument('--graph', default=None,
                        help='Graph edge-list file')
    parser_maxcut.add_argument('--cycle', type=int, default=None,
                        help='Use the cycle graph on this many vertices')
    parser_maxcut.set_defaults(func=self.cmd_maxcut)

    # ======================= version

    parser_version = subparsers.add_parser('version',
                            description='''Display version information.''')
    parser_version.set_defaults(func=self.cmd_version)

    # =========================================================

    argcomplete.autocomplete(parser)
    try:
      args = parser.parse_args(self._argv)
    except ArgparseExitError as ex:
      return ex.exit_code
    traceback: bool = args.traceback
    try:
      self._args = args
      logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT, stream=sys.stderr)
      monochrome: bool = args.monochrome
      if not monochrome:
        self._colorize_stdout = is_colorizable(sys.stdout)
        self._colorize_stderr = is_colorizable(sys.stderr)
        if self._colorize_stdout or self._colorize_stderr:
          colorama.init(wrap=False)
          if self._colorize_stdout:
            sys.stdout = colorama.AnsiToWin32(sys.stdout)
          if self._colorize_stderr:
            sys.stderr = colorama.AnsiToWin32(sys.stderr)
      self._cwd = os.path.abspath(os.path.expanduser(args.cwd))
      rc = args.func()
    except Exception as ex:
      if isinstance(ex, CmdExitError):
        rc = ex.exit_code
      elif isinstance(ex, ConfigError):
        rc = 2
      else:
        rc = 1
      if rc != 0:
        if traceback:
          raise

        print(f"{self.ecolor(Fore.RED)}vmi2stro: error: {ex}{self.ecolor(Style.RESET_ALL)}", file=sys.stderr)
    return rc

def run(argv: Optional[Sequence[str]]=None) -> int:
  try:
    rc = CommandHandler(argv).run()
  except CmdExitError as ex:
    rc = ex.exit_code
  return rc

# allow running with "python3 -m", or as a standalone script
if __name__ == "__main__":
  sys.exit(run())
