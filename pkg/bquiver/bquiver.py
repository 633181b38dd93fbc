import argparse
import json
import os
import random
import sys

from bquiver.align_utils import classify, render_forest, render_unlabeled
from bquiver.config_utils import load_config
from bquiver.file_utils import get_latest_file, load_report, save_dataframe, save_report
from bquiver.forest_utils import parse_forest
from bquiver.orbit_utils import delta, parse_borbit
from bquiver.quiver_utils import (QuiverError, build_quiver, format_partition, format_path, parse_partition,
                                  quiver_dataframe, to_dot, to_json)
from bquiver.relation_utils import dims_dataframe, format_vector, kernel_I, verify_conjecture, verify_range
from bquiver.word_utils import pi


def build_parser():
    parser = argparse.ArgumentParser(prog='bquiver',
                                     description='Quiver presentations of the descent algebras of type B.')
    parser.add_argument('--threads', type=int, default=None, help='worker processes (default from the configuration)')
    parser.add_argument('--seed', type=int, default=0, help='seed for sampled output')
    parser.add_argument('--config', default=None, help='configuration file (default config.ini)')
    parser.add_argument('--verbose', action='store_true', help='print progress messages')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('quiver', help='print the quiver Q_n')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--format', choices=['text', 'dot', 'json', 'csv'], default='text')
    p.add_argument('--no-isolated', action='store_true', help='omit vertices without edges from DOT output')
    p.add_argument('--output', default=None, help='write to a file instead of standard output')

    p = sub.add_parser('dims', help='print the dimensions of kQ_n, I and the quotient')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--csv', default=None, help='also write the table as CSV')
    p.add_argument('--json', action='store_true')

    p = sub.add_parser('verify', help='check that the (B) and (J) families generate I')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--n-max', type=int, default=None, help='verify every n up to this value')
    p.add_argument('--no-j-correction', action='store_true', help='lift the (J) renderings without correction')
    p.add_argument('--save', action='store_true', help='write the JSON report into the report directory')
    p.add_argument('--json', action='store_true')

    p = sub.add_parser('delta', help='delta of a forest or of a B-orbit')
    p.add_argument('--expr', required=True)
    p.add_argument('--as-borbit', action='store_true', help='read the expression as a B-orbit sum')

    p = sub.add_parser('pi', help='pi of an unlabeled forest')
    p.add_argument('--expr', required=True)

    p = sub.add_parser('render', help='strongly right aligned rendering of a forest')
    p.add_argument('--expr', required=True)
    p.add_argument('--labeled', action='store_true', help='apply the preferred labeling to every term')

    p = sub.add_parser('paths', help='list the paths of Q_n')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--source', default=None)
    p.add_argument('--dest', default=None)
    p.add_argument('--length', type=int, default=None)
    p.add_argument('--sample', type=int, default=None, help='print this many paths chosen at random')

    p = sub.add_parser('kernel', help='print the normalized basis of I per block')
    p.add_argument('--n', type=int, required=True)

    p = sub.add_parser('report', help='print the latest saved verification report')
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--dir', default=None)
    return parser


def _emit(text, output=None):
    if output:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        sys.stdout.write(text if text.endswith('\n') else text + '\n')


def _check_n(n):
    if n < 1:
        raise QuiverError(f'n must be positive, got {n}')


def cmd_quiver(args, config):
    _check_n(args.n)
    q = build_quiver(args.n, verbose=args.verbose)
    if args.format == 'dot':
        _emit(to_dot(q, include_isolated=not args.no_isolated), args.output)
    elif args.format == 'json':
        _emit(to_json(q), args.output)
    elif args.format == 'csv':
        df = quiver_dataframe(q)
        if args.output:
            save_dataframe(df, args.output)
        else:
            _emit(df.to_csv(index=False))
    else:
        lines = [f'Q{q.n}: {len(q.vertices)} vertices, {len(q.edges)} edges']
        for e in q.edges:
            lines.append(f'e{e.id} {e.kind} {format_partition(e.source)} -> {format_partition(e.dest)}  [ {e.rep} ]B')
        _emit('\n'.join(lines), args.output)
    return 0


def cmd_dims(args, config):
    _check_n(args.n)
    q = build_quiver(args.n, verbose=args.verbose)
    df = dims_dataframe(q, kernel_I(q, threads=config.threads, verbose=args.verbose))
    if args.csv:
        save_dataframe(df, args.csv)
    if args.json:
        _emit(json.dumps({k: int(v) for k, v in zip(df['quantity'], df['value'])}, indent=2))
    else:
        _emit('\n'.join(f'{k}: {v}' for k, v in zip(df['quantity'], df['value'])))
    return 0


def cmd_verify(args, config):
    correction = False if args.no_j_correction else None
    if args.n_max is not None:
        df = verify_range(range(args.n, args.n_max + 1), threads=config.threads, config=config,
                          j_correction=correction, verbose=args.verbose)
        _emit(df.to_string(index=False))
        return 0 if (df['verdict'] == 'PASS').all() else 1
    report = verify_conjecture(args.n, config=config, j_correction=correction, verbose=args.verbose)
    if args.save:
        path = save_report(report, config.report_dir)
        print(f'report saved to {path}')
    if args.json:
        _emit(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        _print_report(report)
    return 0 if report['verdict'] == 'PASS' else 1


def _print_report(report):
    lines = [f"Q{report['n']}: {report['verdict']}",
             f"dim kQ = {report['dim_kQ']}",
             f"dim I = {report['dim_I']}",
             f"dim quotient = {report['dim_quotient']} (expected {report['expected_quotient']})",
             f"dim ideal generated by (B) and (J) = {report['dim_ideal']}",
             f"dim span (B) = {report['dim_B']}, dim span (J) = {report['dim_J']}"]
    for w in report['witnesses']:
        lines.append(f'not generated: {w}')
    for d in report['b_diagnostics'] + report['j_diagnostics']:
        lines.append(f"{d['kind']}: {d['message']}")
    _emit('\n'.join(lines))


def cmd_delta(args, config):
    x = parse_borbit(args.expr) if args.as_borbit else parse_forest(args.expr)
    _emit(str(delta(x)))
    return 0


def cmd_pi(args, config):
    _emit(str(pi(parse_forest(args.expr))))
    return 0


def cmd_render(args, config):
    f = parse_forest(args.expr)
    print(f'class: {classify(f).name}')
    _emit(str(render_forest(f) if args.labeled else render_unlabeled(f)))
    return 0


def cmd_paths(args, config):
    _check_n(args.n)
    q = build_quiver(args.n, verbose=args.verbose)
    paths = q.paths
    if args.source is not None:
        source = parse_partition(args.source)
        paths = [p for p in paths if p.source == source]
    if args.dest is not None:
        dest = parse_partition(args.dest)
        paths = [p for p in paths if p.dest == dest]
    if args.length is not None:
        paths = [p for p in paths if p.length == args.length]
    if args.sample is not None and args.sample < len(paths):
        paths = sorted(random.sample(paths, args.sample), key=lambda p: p.id)
    _emit('\n'.join(format_path(p) for p in paths) if paths else 'no paths')
    return 0


def cmd_kernel(args, config):
    _check_n(args.n)
    q = build_quiver(args.n, verbose=args.verbose)
    kernel = kernel_I(q, threads=config.threads, verbose=args.verbose)
    lines = [f'{v.label}: {format_vector(v, q)}' for v in kernel]
    _emit('\n'.join(lines) if lines else '0')
    return 0


def cmd_report(args, config):
    directory = args.dir or config.report_dir
    name = f'verify_Q{args.n}_*.json' if args.n else 'verify_Q*_*.json'
    path = get_latest_file(os.path.join(directory, name), verbose=args.verbose)
    if path is None:
        raise ValueError(f'no saved report in {directory}')
    report = load_report(path)
    _print_report(report)
    return 0 if report['verdict'] == 'PASS' else 1


COMMANDS = {
    'quiver': cmd_quiver,
    'dims': cmd_dims,
    'verify': cmd_verify,
    'delta': cmd_delta,
    'pi': cmd_pi,
    'render': cmd_render,
    'paths': cmd_paths,
    'kernel': cmd_kernel,
    'report': cmd_report,
}


def _module_name(exc):
    return type(exc).__module__.split('.')[-1].replace('_utils', '')


def run(args):
    """
    Execute a parsed command.

    Returns
    -------
    int
        0 on success, 1 on a FAIL verdict, 2 on an error. Errors are printed
        as "error: <module>: <message>" on standard error.
    """
    try:
        config = load_config(args.config, threads=args.threads)
        random.seed(args.seed)
        return COMMANDS[args.command](args, config)
    except ValueError as exc:
        print(f'error: {_module_name(exc)}: {exc}', file=sys.stderr)
        return 2


def main(argv=None):
    args = build_parser().parse_args(argv)
    sys.exit(run(args))


if __name__ == '__main__':
    main()
