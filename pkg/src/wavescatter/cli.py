"""
Command line front end.

``wavescatter scatter`` transforms a WAV, PGM or NPY file and writes the
coefficients with a JSON sidecar, ``wavescatter filterbank`` dumps the
filter spectra and prints the Littlewood-Paley bounds, and
``wavescatter info`` prints the path table of a configuration.
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .filterbank import littlewood_paley
from .io import InputError, read_input, write_output
from .scattering1d import plan_1d, scatter_1d
from .scattering2d import plan_2d, scatter_2d
from .scattering3d import plan_3d, scatter_3d

__all__ = ['RunConfig', 'cmd_scatter', 'cmd_filterbank', 'cmd_info', 'main']

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARAMS = 2
EXIT_OUTPUT = 3


@dataclass
class RunConfig:
    dim: int
    J: int
    Q: int = 1
    L: int = 8
    L_max: int = 2
    oversampling: int = 0
    input: str = None
    output: str = None
    format: str = 'npy'
    meta: str = None
    threads: int = None
    shape: tuple = None

    def validate(self):
        if self.dim not in (1, 2, 3):
            raise ValueError('dim must be 1, 2 or 3, got {}'.format(self.dim))
        if self.J < 1:
            raise ValueError('J must be at least 1, got J={}'.format(self.J))
        if self.dim == 1 and self.Q < 1:
            raise ValueError('Q must be at least 1, got {}'.format(self.Q))
        if self.dim == 2 and self.L < 1:
            raise ValueError('L must be at least 1, got {}'.format(self.L))
        if self.dim == 3 and self.L_max < 0:
            raise ValueError('Lmax must be non-negative, got {}'
                             .format(self.L_max))
        if self.oversampling < 0:
            raise ValueError('oversampling must be non-negative')
        if self.format not in ('npy', 'csv'):
            raise ValueError('format must be npy or csv')
        if self.threads is not None and self.threads < 1:
            raise ValueError('threads must be at least 1')

    def parameters(self):
        params = {'dim': self.dim, 'J': self.J}
        if self.dim == 1:
            params.update(Q=self.Q, oversampling=self.oversampling)
        elif self.dim == 2:
            params.update(L=self.L, oversampling=self.oversampling)
        else:
            params.update(L_max=self.L_max)
        return params


def _plan(config, shape):
    if config.dim == 1:
        if len(shape) != 1:
            raise ValueError('expected a 1D signal, got shape {}'
                             .format(shape))
        return plan_1d(shape[0], config.J, config.Q, config.oversampling)
    if config.dim == 2:
        return plan_2d(shape, config.J, config.L, config.oversampling)
    return plan_3d(shape, config.J, config.L_max)


def _scatter(config, plan, x, threads):
    fn = {1: scatter_1d, 2: scatter_2d, 3: scatter_3d}[config.dim]
    return fn(plan, x, threads)


def _default_shape(config):
    return config.shape or (2 ** config.J,) * config.dim


def _fail(code, message):
    print('error: {}'.format(message), file=sys.stderr)
    return code


def _sidecar(config, plan, out):
    coefficients = out.coefficients
    return {
        'parameters': config.parameters(),
        'input_shape': list(plan.shape),
        'output_shape': list(coefficients.shape),
        'paths': [dict(index=i, **p.to_dict())
                  for i, p in enumerate(out.meta)],
        # per-worker peak, so the file does not depend on --threads
        'peak_live_intermediates': out.stats.per_worker_peak,
    }


def cmd_scatter(config):
    try:
        config.validate()
    except ValueError as e:
        return _fail(EXIT_PARAMS, e)
    if not config.input or not config.output:
        return _fail(EXIT_PARAMS, 'scatter needs --input and --output')
    try:
        x = read_input(config.input, config.dim)
    except InputError as e:
        return _fail(EXIT_INPUT, e)
    try:
        plan = _plan(config, x.shape)
    except ValueError as e:
        return _fail(EXIT_PARAMS, e)
    threads = config.threads or os.cpu_count() or 1
    out = _scatter(config, plan, x, threads)
    meta_path = config.meta or config.output + '.json'
    try:
        write_output(config.output, out.coefficients, config.format)
        with open(meta_path, 'w') as f:
            json.dump(_sidecar(config, plan, out), f, indent=1,
                      sort_keys=True)
            f.write('\n')
    except OSError as e:
        return _fail(EXIT_OUTPUT, 'cannot write output: {}'.format(e))
    return EXIT_OK


def _write_filters(config, bank):
    filters = list(bank.first_order)
    if bank.second_order is not bank.first_order:
        filters += list(bank.second_order)
    filters.append(bank.lowpass)
    stack = np.stack([f.spectra[0] for f in filters])
    if config.format == 'npy':
        with open(config.output, 'wb') as f:
            np.lib.format.write_array(f, np.ascontiguousarray(stack),
                                      version=(1, 0), allow_pickle=False)
    else:
        # spectra are complex; CSV carries their magnitudes
        write_output(config.output, np.abs(stack), 'csv')
    if config.meta:
        specs = [{k: v for k, v in vars(f.spec).items() if v is not None}
                 for f in filters]
        with open(config.meta, 'w') as f:
            json.dump({'parameters': config.parameters(),
                       'shape': list(bank.shape), 'filters': specs},
                      f, indent=1, sort_keys=True)
            f.write('\n')


def cmd_filterbank(config):
    try:
        config.validate()
        plan = _plan(config, _default_shape(config))
    except ValueError as e:
        return _fail(EXIT_PARAMS, e)
    A, B = littlewood_paley(plan.bank)
    print('LP A={!r} B={!r}'.format(A, B))
    if config.output:
        try:
            _write_filters(config, plan.bank)
        except OSError as e:
            return _fail(EXIT_OUTPUT, 'cannot write output: {}'.format(e))
    return EXIT_OK


def _format_lambda(v):
    if v is None:
        return '-'
    if isinstance(v, tuple):
        return ','.join(str(i) for i in v)
    return str(v)


def cmd_info(config):
    try:
        config.validate()
        plan = _plan(config, _default_shape(config))
    except ValueError as e:
        return _fail(EXIT_PARAMS, e)
    out_shape = 'x'.join(str(n // 2 ** config.J) for n in plan.shape)
    print('index\torder\tlambda1\tlambda2\tshape')
    for i, p in enumerate(plan.paths):
        print('{}\t{}\t{}\t{}\t{}'.format(i, p.order,
                                          _format_lambda(p.lambda1),
                                          _format_lambda(p.lambda2),
                                          out_shape))
    return EXIT_OK


def _shape_arg(text):
    try:
        shape = tuple(int(s) for s in text.replace('x', ',').split(',') if s)
    except ValueError:
        raise argparse.ArgumentTypeError('shape must look like 64 or 32x32')
    if not shape:
        raise argparse.ArgumentTypeError('empty shape')
    return shape


def build_parser():
    parser = argparse.ArgumentParser(
        prog='wavescatter',
        description='Wavelet scattering transforms of signals, images and '
                    'volumes.')
    sub = parser.add_subparsers(dest='command', required=True)
    for name, help_text in [('scatter', 'transform an input file'),
                            ('filterbank', 'dump filters and frame bounds'),
                            ('info', 'print the path table')]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument('--dim', type=int, required=True, choices=(1, 2, 3))
        p.add_argument('--J', type=int, required=True)
        p.add_argument('--Q', type=int, default=1)
        p.add_argument('--L', type=int, default=8)
        p.add_argument('--Lmax', type=int, default=2, dest='L_max')
        p.add_argument('--oversampling', type=int, default=0)
        p.add_argument('--output')
        p.add_argument('--format', default='npy', choices=('npy', 'csv'))
        p.add_argument('--meta')
        if name == 'scatter':
            p.add_argument('--input')
            p.add_argument('--threads', type=int, default=None)
        else:
            p.add_argument('--shape', type=_shape_arg, default=None,
                           help='grid shape, e.g. 8192 or 32x32 '
                                '(default 2**J per axis)')
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse reports bad flags with status 2, matching EXIT_PARAMS
        return e.code
    fields = vars(args)
    command = fields.pop('command')
    config = RunConfig(**fields)
    if config.shape is not None and len(config.shape) != config.dim:
        return _fail(EXIT_PARAMS, '--shape has {} entries, --dim is {}'
                     .format(len(config.shape), config.dim))
    handler = {'scatter': cmd_scatter, 'filterbank': cmd_filterbank,
               'info': cmd_info}[command]
    return handler(config)


if __name__ == '__main__':
    sys.exit(main())
