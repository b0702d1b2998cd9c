"""Reading inputs and writing coefficient files for the command line."""
import os
import wave

import numpy as np

__all__ = ['InputError', 'read_input', 'read_npy', 'read_wav', 'read_pgm',
           'write_output', 'write_npy', 'write_csv']


class InputError(ValueError):
    """An input file that cannot be parsed into a real grid."""


def read_npy(path, dim):
    try:
        x = np.load(path, allow_pickle=False)
    except (OSError, ValueError) as e:
        raise InputError('cannot read NPY file {}: {}'.format(path, e))
    if x.dtype not in (np.dtype('<f4'), np.dtype('<f8')):
        raise InputError('NPY data must be little-endian float32 or float64, '
                         'got {}'.format(x.dtype.str))
    if x.ndim != dim:
        raise InputError('NPY array has {} dimensions, expected {}'
                         .format(x.ndim, dim))
    return np.ascontiguousarray(x, dtype=np.float64)


def read_wav(path):
    """16-bit PCM mono WAV, scaled by 1/32768."""
    try:
        with wave.open(str(path), 'rb') as w:
            channels = w.getnchannels()
            width = w.getsampwidth()
            raw = w.readframes(w.getnframes())
    except (OSError, EOFError, wave.Error) as e:
        raise InputError('cannot read WAV file {}: {}'.format(path, e))
    if channels != 1:
        raise InputError('WAV file has {} channels; only mono input is '
                         'accepted, mix down before scattering'
                         .format(channels))
    if width != 2:
        raise InputError('WAV samples are {}-bit; only 16-bit PCM is '
                         'accepted'.format(8 * width))
    return np.frombuffer(raw, dtype='<i2').astype(np.float64) / 32768.


def _pgm_tokens(data, count):
    """Split the first ``count`` header fields, skipping comments."""
    tokens = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b'#':
            while pos < len(data) and data[pos:pos + 1] not in b'\r\n':
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise InputError('truncated PGM header')
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    return tokens, pos + 1


def read_pgm(path):
    """Binary P5 greymap with maxval 255, scaled by 1/255."""
    try:
        with open(path, 'rb') as f:
            data = f.read()
    except OSError as e:
        raise InputError('cannot read PGM file {}: {}'.format(path, e))
    tokens, offset = _pgm_tokens(data, 4)
    if tokens[0] != b'P5':
        raise InputError('not a binary PGM (P5) file')
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise InputError('malformed PGM header')
    if maxval > 255:
        raise InputError('16-bit PGM (maxval {}) is not supported'
                         .format(maxval))
    if maxval != 255:
        raise InputError('PGM maxval must be 255, got {}'.format(maxval))
    raster = data[offset:offset + width * height]
    if len(raster) != width * height:
        raise InputError('PGM raster is truncated')
    img = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return img.astype(np.float64) / 255.


def read_input(path, dim):
    """
    Load a real grid of dimensionality ``dim``.

    ``.npy`` works for any dimension, ``.wav`` for signals and ``.pgm``
    for images.
    """
    ext = os.path.splitext(str(path))[1].lower()
    if ext == '.npy':
        return read_npy(path, dim)
    if ext == '.wav':
        if dim != 1:
            raise InputError('WAV input requires --dim 1')
        return read_wav(path)
    if ext == '.pgm':
        if dim != 2:
            raise InputError('PGM input requires --dim 2')
        return read_pgm(path)
    raise InputError('unsupported input extension {!r}'.format(ext))


def write_npy(path, coefficients):
    """Write float64 C-order data as NPY version 1.0."""
    arr = np.ascontiguousarray(coefficients, dtype='<f8')
    with open(path, 'wb') as f:
        np.lib.format.write_array(f, arr, version=(1, 0),
                                  allow_pickle=False)


def write_csv(path, coefficients):
    """One line per path, spatial samples flattened row-major."""
    arr = np.asarray(coefficients, dtype=np.float64)
    flat = arr.reshape(arr.shape[0], -1)
    with open(path, 'w') as f:
        f.write('path,' + ','.join('s{}'.format(i)
                                   for i in range(flat.shape[1])) + '\n')
        for i, row in enumerate(flat):
            f.write('{},'.format(i) + ','.join(repr(float(v)) for v in row)
                    + '\n')


def write_output(path, coefficients, fmt='npy'):
    if fmt == 'npy':
        write_npy(path, coefficients)
    elif fmt == 'csv':
        write_csv(path, coefficients)
    else:
        raise ValueError('unknown output format {!r}'.format(fmt))
