#!/usr/bin/env python3
"""
quarticlines CLI
Command-line interface for the lattice classification of lines on quartics.

Usage:
    ql lattice --lattice E8+A2+D1
    ql vec --lattice D4 --class lambda
    ql bnd --lattice A11 --class eta
    ql classify --lattice D8 --class eta --strategy exhaustive-maximal
    ql pipeline --series X
    ql elkies --series T
    ql betti --singularities X9 --q 0
    ql tseries --config V19 --analyze --realize
    ql report --table 1
    ql regress --include-slow --manifest manifest.json
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from typing import Any, Iterable, List, Optional, Sequence

from dotenv import load_dotenv

from ...bounds import (
    ElkiesInput,
    betti,
    elkies_bound,
    get_profile,
    series_elkies,
    sigma_candidates,
    table_report,
)
from ...bounds.elkies import normalized_taus
from ...configs.admissible import (
    LineConfiguration,
    Strategy,
    classify,
    profile_space,
    search_space,
    vector_graph,
)
from ...configs.graphs import to_dot
from ...core.enumeration import VecQuery, enumerate_vectors
from ...core.exact import as_fraction
from ...core.lattice import discriminant_group, parse_lattice
from ...core.monitor import MonitorConfig, SearchMonitor
from ...core.worker import SearchConfig, SearchWorker
from ...tseries import (
    GROUPS,
    CollinearitySystem,
    load_config,
    modulus_sweep,
    realizability_verdict,
    snf_analysis,
    sum_relation_check,
)
from ..python.api import PIPELINE_SERIES, WITNESS_SCOPES, PipelineConfig, Pipeline
from .regress import run_regression
from .resolve import default_norm, lambda_context, lattice_bound, resolve

logger = logging.getLogger(__name__)

FORMATS = ('text', 'json', 'csv', 'dot')


class UsageError(ValueError):
    """A flag combination the subcommand cannot serve."""


def _dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def _emit(args, payload: Any, text: Optional[str] = None, table: Optional[str] = None,
          dot: Optional[str] = None):
    """Print ``payload`` in the requested format; text falls back to JSON."""
    fmt = args.format
    if fmt == 'json' or (fmt == 'text' and text is None):
        out = _dumps(payload)
    elif fmt == 'text':
        out = text
    elif fmt == 'csv':
        if table is None:
            raise UsageError(f"{args.command} has no CSV output")
        out = table
    else:
        if dot is None:
            raise UsageError(f"{args.command} has no DOT output")
        out = dot
    print(out.rstrip('\n'))


def cmd_lattice(args):
    """Show a lattice, its discriminant group, or the Σ candidates of a series"""
    if args.candidates:
        rows = sigma_candidates(args.candidates)
        lines = [f"🔷 Σ candidates for {get_profile(args.candidates).title}"]
        for c in rows:
            mark = '✅' if c.accommodates else '⚪'
            lines.append(f"  {mark} {c.lattice}: |vec(Σ, λ)| = {c.lambda_count}"
                         + ('  (selected)' if c.selected else ''))
        _emit(args, [c.to_dict() for c in rows], text='\n'.join(lines),
              table=_csv(('spec', 'lattice', 'lambda_count', 'accommodates', 'selected'),
                         ((c.spec, c.lattice, c.lambda_count, c.accommodates, c.selected)
                          for c in rows)))
        return
    if not args.lattice:
        raise UsageError("lattice needs --lattice or --candidates")
    lattice = parse_lattice(args.lattice)
    group = discriminant_group(lattice)
    payload = {**lattice.to_dict(), 'rank': lattice.rank, 'det': str(lattice.det),
               'discriminant': group.to_dict(), 'order': group.order}
    text = '\n'.join([
        f"🔷 {lattice.name}",
        f"   rank {lattice.rank}, det {lattice.det}",
        "   Σ∨/Σ ≅ " + (' ⊕ '.join(f"ℤ/{d}" for d in group.invariant_factors) or '0'),
    ])
    _emit(args, payload, text=text)


def cmd_vec(args):
    """Enumerate vec(Σ, γ, q)"""
    lattice = parse_lattice(args.lattice)
    cls, _ = resolve(lattice, args.cls, args.series)
    q = as_fraction(args.q) if args.q is not None else default_norm(cls, args.cls, args.window)
    vectors = enumerate_vectors(VecQuery(lattice, cls, q))
    payload = {
        'lattice': lattice.name,
        'class': cls.to_dict(),
        'q': str(q),
        'count': len(vectors),
        'vectors': [v.to_dict() for v in vectors],
    }
    lines = [f"🔍 vec({lattice.name}, {list(cls.coords)}, {q}): {len(vectors)} vectors"]
    lines += [f"  {v.label()}" for v in vectors]
    _emit(args, payload, text='\n'.join(lines),
          table=_csv(('coords', 'norm'), ((v.label(), str(v.norm)) for v in vectors)))


def cmd_bnd(args):
    """Size of the largest admissible subset"""
    lattice = parse_lattice(args.lattice)
    result = lattice_bound(lattice, args.cls, args.series, args.q)
    payload = {'lattice': lattice.name, 'class': args.cls, **result.to_dict()}
    _emit(args, payload, text=str(result.value),
          table=_csv(('lattice', 'class', 'bnd'), [(lattice.name, args.cls, result.value)]))


def _classify_space(args):
    lattice = parse_lattice(args.lattice)
    cls, profile = resolve(lattice, args.cls, args.series)
    lambdas, meet = lambda_context(lattice, args.cls, profile)
    if lambdas and args.q is None:
        return profile_space(profile), profile
    q = as_fraction(args.q) if args.q is not None else default_norm(cls, args.cls)
    return search_space(lattice, cls, q, lambdas, meet, name=lattice.name), profile


def cmd_classify(args):
    """Admissible sets of a class, one per orbit, grouped by graph shape"""
    space, profile = _classify_space(args)
    strategy = Strategy.parse(args.strategy, args.min_size)
    config = SearchConfig.from_env(jobs=args.jobs, run_id=args.run_id,
                                   persist=args.extended)
    worker = SearchWorker(space, strategy, config)
    try:
        found = worker.run()
    finally:
        worker.close()
    configurations = [LineConfiguration.from_space(space, item.members, profile,
                                                   name=f"{space.name}-{item.size}")
                      for item in found]
    shapes = classify(configurations)
    payload = {
        'space': space.name,
        'strategy': strategy.label,
        'vectors': len(space),
        'sets': [item.to_dict() for item in found],
        'shapes': [s.to_dict() for s in shapes],
    }
    lines = [f"🔍 {space.name} [{strategy.label}]: {len(found)} sets in {len(shapes)} shapes"]
    lines += [f"  {s.count:>4} × {s.shape.name} ({s.shape.n_vertices} lines)" for s in shapes]
    dot = ''.join(to_dot(vector_graph(list(s.representatives[0])), f"shape_{k + 1}")
                  for k, s in enumerate(shapes))
    _emit(args, payload, text='\n'.join(lines), dot=dot,
          table=_csv(('shape', 'vertices', 'edges', 'count'),
                     ((s.shape.name, s.shape.n_vertices, s.shape.n_edges, s.count)
                      for s in shapes)))


def cmd_pipeline(args):
    """Run the classification pipeline of one series"""
    series = get_profile(args.series).series
    if series == 'T' and not args.extended:
        raise UsageError("the T-series census runs for hours; pass --extended to start it")
    config = PipelineConfig(
        series=series,
        strategy=args.strategy,
        min_size=args.min_size,
        ell_cross=not args.no_ell_cross,
        witness_scope=args.witness_scope,
        extended=args.extended,
        jobs=args.jobs,
        run_id=args.run_id,
    )
    report = Pipeline(config).run()
    lines = [f"🔍 {series} [{report.strategy}]: {report.searched} sets, "
             f"{len(report.survivors)} survive, {len(report.rejected)} rejected"]
    for s in report.survivors:
        trial = '' if s.trial is None else ('  trial ✅' if s.trial else '  trial ❌')
        lines.append(f"  {s.size:>3} lines  {s.shape:<24} total {s.total_with_k_lines}{trial}")
    lines.append(f"📊 totals: {report.totals}")
    _emit(args, report.to_dict(), text='\n'.join(lines), dot=report.to_dot(),
          table=_csv(('size', 'shape', 'dynkin', 'total_with_k_lines', 'certificate'),
                     ((s.size, s.shape, s.dynkin, s.total_with_k_lines,
                       s.found.certificate.hex()) for s in report.survivors)))


def cmd_elkies(args):
    """The E column, or one evaluation of the Elkies bound"""
    if args.series:
        result = series_elkies(args.series, args.singularities)
        lines = [f"📐 {get_profile(args.series).title}: E = {result.total}"]
        lines += [f"   {step}" for step in result.steps]
        _emit(args, result.to_dict(), text='\n'.join(lines),
              table=_csv(('series', 'n', 'lines_bound', 'extra', 'k_lines', 'total'),
                         [(result.series, result.n, result.lines_bound, result.extra,
                           result.k_lines, result.total)]))
        return
    if args.n is None:
        raise UsageError("elkies needs --series or --n")
    if args.q0 is not None:
        tau1, tau2 = normalized_taus(args.q0)
    elif args.tau1 is not None and args.tau2 is not None:
        tau1, tau2 = args.tau1, args.tau2
    else:
        raise UsageError("elkies --n needs --q0 or both --tau1 and --tau2")
    result = elkies_bound(ElkiesInput(args.n, tau1, tau2))
    _emit(args, result.to_dict(), text=f"{result.value} → {result.floor}")


def cmd_betti(args):
    """b2 of the minimal resolution"""
    if args.series:
        profile = get_profile(args.series)
        q, labels = profile.q_irregularity, list(profile.nonsimple)
        value = profile.b2_rational
    else:
        if not args.singularities:
            raise UsageError("betti needs --series or --singularities")
        q, labels = args.q, args.singularities
        value = betti(q, labels)
    payload = {'q': q, 'singularities': labels, 'b2': value}
    _emit(args, payload, text=str(value),
          table=_csv(('q', 'singularities', 'b2'), [(q, ' '.join(labels), value)]))


def cmd_tseries(args):
    """Smith-form analysis and realizability of a T-series incidence matrix"""
    matrix = load_config(args.config)
    system = CollinearitySystem.from_incidence(matrix)
    payload = {'config': matrix.to_dict()}
    lines = [f"🔺 {matrix.name}: {matrix.n_lines} collinear triples"]
    if args.analyze or not args.realize:
        snf = snf_analysis(system)
        payload['snf'] = snf.to_dict()
        payload['sum_relation'] = sum_relation_check(system)
        lines.append(f"   rank {snf.rank}, invariant factors {snf.invariant_factors}")
        lines.append(f"   Σ p_i = 0 follows: {payload['sum_relation']}")
    if args.realize:
        groups = args.group or list(GROUPS)
        verdicts = [realizability_verdict(system, g, max_modulus=args.max_modulus)
                    for g in groups]
        payload['verdicts'] = [v.to_dict() for v in verdicts]
        for v in verdicts:
            icon = '✅' if v.possible else '❌' if v.status == 'impossible-distinct' else '❔'
            lines.append(f"   {icon} {v.group.label} ({v.group.singularity}): {v.status}")
    if args.sweep:
        solution = modulus_sweep(system, args.max_modulus, args.dim)
        payload['sweep'] = solution.to_dict() if solution else None
        lines.append(f"   (ℤ/N)^{args.dim} sweep: "
                     + (f"N = {solution.modulus}" if solution else f"none for N ≤ {args.max_modulus}"))
    _emit(args, payload, text='\n'.join(lines))


def cmd_report(args):
    """Recompute a summary table, or report checkpointed search progress"""
    if args.runs:
        monitor = SearchMonitor(MonitorConfig.from_env())
        if args.watch:
            monitor.run()
            return
        _emit(args, monitor.get_status_json(), text=monitor.create_progress_report())
        return
    report = table_report(args.table, args.series or None, compute_bounds=not args.no_bounds)
    _emit(args, report.to_dict(), text=report.to_text(), table=report.to_csv())


def cmd_regress(args):
    """Run the acceptance checks; exit 1 on any unflagged mismatch"""
    manifest = run_regression(args.include_slow, args.include_extended,
                              command=['ql'] + list(args.argv))
    if args.manifest:
        with open(args.manifest, 'w') as f:
            f.write(manifest.to_json() + '\n')
        logger.info(f"Manifest written to {args.manifest}")
    passed = sum(1 for r in manifest.results if r.matches_paper)
    known = sum(1 for r in manifest.results if not r.matches_paper and not r.failed)
    lines = [f"📊 {len(manifest.results)} checks: {passed} match, {known} known issues, "
             f"{len(manifest.failures)} failed"]
    if manifest.failures:
        lines.append(manifest.diff())
    _emit(args, manifest.to_dict(with_timings=False), text='\n'.join(lines))
    return 1 if manifest.failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ql',
        description='🔷 quarticlines - lines on non-K3 quartics, by lattice bounds'
    )
    parser.add_argument('--format', choices=FORMATS, default='text', help='Output format')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='More logging (-vv for debug)')

    subparsers = parser.add_subparsers(dest='command', help='Commands')

    # lattice
    lattice_parser = subparsers.add_parser('lattice', help='Show a lattice or the Σ candidates')
    lattice_parser.add_argument('--lattice', help='Lattice, e.g. E8+A2+D1')
    lattice_parser.add_argument('--candidates', metavar='SERIES',
                                help='List the Σ candidates of a series')
    lattice_parser.set_defaults(func=cmd_lattice)

    # vec
    vec_parser = subparsers.add_parser('vec', help='Enumerate vectors of a class')
    vec_parser.add_argument('--lattice', required=True, help='Lattice, e.g. D4')
    vec_parser.add_argument('--class', dest='cls', required=True,
                            help='eta, lambda, zero, gamma or coordinates like 1,0')
    vec_parser.add_argument('--q', help='Norm, e.g. -9/4 (default: the class window)')
    vec_parser.add_argument('--window', choices=['plus', 'std'], help='Norm window')
    vec_parser.add_argument('--series', help='Series naming the η and λ classes')
    vec_parser.set_defaults(func=cmd_vec)

    # bnd
    bnd_parser = subparsers.add_parser('bnd', help='Largest admissible subset size')
    bnd_parser.add_argument('--lattice', required=True, help='Lattice, e.g. A11')
    bnd_parser.add_argument('--class', dest='cls', required=True, help='eta, lambda, zero, gamma')
    bnd_parser.add_argument('--q', help='Norm (default: the class window)')
    bnd_parser.add_argument('--series', help='Series naming the η and λ classes')
    bnd_parser.set_defaults(func=cmd_bnd)

    # classify
    classify_parser = subparsers.add_parser('classify', help='Admissible sets by graph shape')
    classify_parser.add_argument('--lattice', required=True, help='Lattice, e.g. D8')
    classify_parser.add_argument('--class', dest='cls', default='eta', help='Class (default: eta)')
    classify_parser.add_argument('--q', help='Norm (default: the class window)')
    classify_parser.add_argument('--series', help='Series naming the η and λ classes')
    classify_parser.add_argument('--strategy', default='exhaustive-maximal',
                                 help='exhaustive-maximal, size-at-least:N, triangle-free, contains-K4')
    classify_parser.add_argument('--min-size', type=int, help='Smallest set size to report')
    classify_parser.add_argument('--jobs', type=int, help='Worker processes')
    classify_parser.add_argument('--run-id', help='Checkpoint name for --extended runs')
    classify_parser.add_argument('--extended', action='store_true',
                                 help='Checkpoint progress and resume interrupted runs')
    classify_parser.set_defaults(func=cmd_classify)

    # pipeline
    pipeline_parser = subparsers.add_parser('pipeline', help='Per-series classification')
    pipeline_parser.add_argument('--series', required=True, choices=PIPELINE_SERIES + ('J*',),
                                 help='Series')
    pipeline_parser.add_argument('--strategy', help='Override the series strategy')
    pipeline_parser.add_argument('--min-size', type=int, help='Smallest set size to search')
    pipeline_parser.add_argument('--no-ell-cross', action='store_true',
                                 help='J*: assume the line ℓ× is absent')
    pipeline_parser.add_argument('--witness-scope', choices=WITNESS_SCOPES, default='set',
                                 help='Where the triangle filter looks for witnesses')
    pipeline_parser.add_argument('--extended', action='store_true',
                                 help='Allow long runs; checkpoint and resume')
    pipeline_parser.add_argument('--jobs', type=int, help='Worker processes')
    pipeline_parser.add_argument('--run-id', help='Checkpoint name')
    pipeline_parser.set_defaults(func=cmd_pipeline)

    # elkies
    elkies_parser = subparsers.add_parser('elkies', help='Elkies two-distance bound')
    elkies_parser.add_argument('--series', help='Series for the E column')
    elkies_parser.add_argument('--singularities', nargs='+',
                               help='Override the non-simple points of the series')
    elkies_parser.add_argument('--n', type=int, help='Dimension')
    elkies_parser.add_argument('--q0', help='Line norm; sets τ from it')
    elkies_parser.add_argument('--tau1', help='First normalised product')
    elkies_parser.add_argument('--tau2', help='Second normalised product')
    elkies_parser.set_defaults(func=cmd_elkies)

    # betti
    betti_parser = subparsers.add_parser('betti', help='b2 of the minimal resolution')
    betti_parser.add_argument('--series', help='Series')
    betti_parser.add_argument('--singularities', nargs='+', help='Non-simple singularity labels')
    betti_parser.add_argument('--q', type=int, default=0, help='Irregularity')
    betti_parser.set_defaults(func=cmd_betti)

    # tseries
    tseries_parser = subparsers.add_parser('tseries', help='T-series incidence matrices')
    tseries_parser.add_argument('--config', required=True,
                                help='Built-in name (V16, V17, V19, Uprime16, ...) or a 0/1 file')
    tseries_parser.add_argument('--analyze', action='store_true', help='Smith-form analysis')
    tseries_parser.add_argument('--realize', action='store_true', help='Realizability verdicts')
    tseries_parser.add_argument('--group', action='append', help='Group (repeatable; default all)')
    tseries_parser.add_argument('--sweep', action='store_true',
                                help='Search (ℤ/N)^dim for a distinct solution')
    tseries_parser.add_argument('--max-modulus', type=int, default=60, help='Largest N')
    tseries_parser.add_argument('--dim', type=int, default=2, help='Torus dimension')
    tseries_parser.set_defaults(func=cmd_tseries)

    # report
    report_parser = subparsers.add_parser('report', help='Summary tables and run progress')
    report_parser.add_argument('--table', choices=['1', '3', 'rational', 'irrational'],
                               default='1', help='Which table')
    report_parser.add_argument('--series', nargs='*', help='Restrict the rows')
    report_parser.add_argument('--no-bounds', action='store_true',
                               help='Skip the branch and bound column')
    report_parser.add_argument('--runs', action='store_true', help='Checkpointed run progress')
    report_parser.add_argument('--watch', action='store_true',
                               help='With --runs: poll until every run completes')
    report_parser.set_defaults(func=cmd_report)

    # regress
    regress_parser = subparsers.add_parser('regress', help='Acceptance checks')
    regress_parser.add_argument('--include-slow', action='store_true',
                                help='Also run the branch and bound and pipeline checks')
    regress_parser.add_argument('--include-extended', action='store_true',
                                help='Also run the T-series census')
    regress_parser.add_argument('--manifest', help='Write the run manifest here')
    regress_parser.set_defaults(func=cmd_regress)

    return parser


def _setup_logging(verbose: int):
    load_dotenv()
    if verbose:
        level = logging.DEBUG if verbose > 1 else logging.INFO
    else:
        level = getattr(logging, os.environ.get('QL_LOG_LEVEL', 'WARNING').upper(), logging.WARNING)
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s',
                        stream=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    """Exit code: 0 on success, 1 on a regression mismatch, 2 on usage errors."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if not args.command:
        parser.print_help()
        return 2
    args.argv = argv
    _setup_logging(args.verbose)

    try:
        return args.func(args) or 0
    except (ValueError, KeyError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"❌ {message}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
