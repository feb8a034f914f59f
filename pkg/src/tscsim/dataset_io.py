"""Reading and writing datasets (ARFF, CSV) and experiment results (JSON).

Dataset files hold one series per row: the values ``att1 .. attN`` followed
by the class label. Values are printed with 6 significant digits, so a
write/read/write cycle reproduces the first file byte for byte. A
:class:`~tscsim.simulators.DatasetPair` is stored as two files sharing a
prefix, ``<prefix>_TRAIN.<ext>`` and ``<prefix>_TEST.<ext>``.

Results documents
-----------------
A results document is a JSON object::

    {
      "schema": "tscsim-results",
      "schema_version": 1,
      "config": {...},                  # echo of the experiment settings
      "simulators": ["elastic", ...],
      "classifiers": ["ed1nn", ...],
      "cells": [
        {"simulator": "elastic", "resample": 0, "child_seed": 123,
         "results": {
            "ed1nn": {"accuracy": 0.93, "error": null, "summary": {...},
                      "fit_seconds": 0.01, "predict_seconds": 0.02},
            ...}},
        ...
      ]
    }

``accuracy`` is null exactly when ``error`` carries the failure message.
``fit_seconds`` and ``predict_seconds`` are the only fields that vary
between identical runs.
"""

import json
import os
from pathlib import Path

import numpy as np

from tscsim.errors import ParseError, SchemaVersionError, ValidationError
from tscsim.simulators import DatasetPair

__all__ = [
    "SCHEMA_NAME",
    "SCHEMA_VERSION",
    "TIMING_FIELDS",
    "format_value",
    "write_dataset",
    "write_split",
    "read_dataset",
    "read_dataset_pair",
    "write_results",
    "read_results",
    "validate_results",
    "strip_timing",
    "dumps_results",
]

SCHEMA_NAME = "tscsim-results"
SCHEMA_VERSION = 1
TIMING_FIELDS = ("fit_seconds", "predict_seconds")

_EXT = {"arff": ".arff", "csv": ".csv"}


def format_value(v):
    """Six significant digits, with negative zero printed as ``0``."""
    text = f"{float(v):.6g}"
    return "0" if text == "-0" else text


def _format(fmt):
    fmt = str(fmt).lower()
    if fmt not in _EXT:
        raise ValueError(f"unknown dataset format {fmt!r}; use 'arff' or 'csv'")
    return fmt


def _rows(X, y):
    for values, label in zip(X, y):
        yield ",".join(format_value(v) for v in values) + f",{int(label)}"


def write_split(X, y, path, fmt="arff", relation="tscsim", classes=None):
    """Write one half of a dataset to ``path``."""
    fmt = _format(fmt)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[0] != y.shape[0]:
        raise ValueError("cannot write an empty or misshapen dataset")
    n = X.shape[1]
    classes = sorted(set(int(c) for c in (classes if classes is not None else y)))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if fmt == "arff":
            fh.write(f"@relation {relation}\n\n")
            for j in range(1, n + 1):
                fh.write(f"@attribute att{j} numeric\n")
            fh.write("@attribute target {" + ",".join(str(c) for c in classes) + "}\n\n@data\n")
        else:
            fh.write(",".join(f"att{j}" for j in range(1, n + 1)) + ",target\n")
        for line in _rows(X, y):
            fh.write(line + "\n")
    return Path(path)


def write_dataset(ds, fmt, destination, relation=None):
    """Write the train and test halves of ``ds``.

    Parameters
    ----------
    ds : DatasetPair
    fmt : {"arff", "csv"}
    destination : str or path
        File prefix; ``_TRAIN``/``_TEST`` and the extension are appended.
    relation : str, optional
        ARFF relation name, defaulting to the prefix's base name.

    Returns
    -------
    tuple of Path
        The train and test file paths.
    """
    fmt = _format(fmt)
    prefix = str(destination)
    relation = relation or os.path.basename(prefix) or "tscsim"
    classes = sorted(set(np.asarray(ds.y_train).tolist()) | set(np.asarray(ds.y_test).tolist()))
    train = write_split(ds.X_train, ds.y_train, prefix + "_TRAIN" + _EXT[fmt], fmt, relation, classes)
    test = write_split(ds.X_test, ds.y_test, prefix + "_TEST" + _EXT[fmt], fmt, relation, classes)
    return train, test


def _parse_row(line, lineno, width):
    fields = [f.strip() for f in line.split(",")]
    if len(fields) != width:
        raise ParseError(f"expected {width} fields, found {len(fields)}", lineno)
    try:
        values = [float(f) for f in fields[:-1]]
    except ValueError as exc:
        raise ParseError(f"non-numeric value ({exc})", lineno) from None
    try:
        label = int(fields[-1])
    except ValueError:
        raise ParseError(f"class label {fields[-1]!r} is not an integer", lineno) from None
    return values, label


def _read_arff(lines):
    n_numeric, classes, in_data = 0, None, False
    rows, labels = [], []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            head = line.lower()
            if head.startswith("@relation"):
                continue
            if head.startswith("@attribute"):
                if classes is not None:
                    raise ParseError("attribute declared after the class attribute", lineno)
                parts = line.split(None, 2)
                if len(parts) < 3:
                    raise ParseError("malformed @attribute line", lineno)
                kind = parts[2].strip()
                if kind.lower() in ("numeric", "real", "integer"):
                    n_numeric += 1
                elif kind.startswith("{") and kind.endswith("}"):
                    classes = {c.strip() for c in kind[1:-1].split(",")}
                else:
                    raise ParseError(f"unsupported attribute type {kind!r}", lineno)
                continue
            if head.startswith("@data"):
                if classes is None or n_numeric == 0:
                    raise ParseError("header needs numeric attributes and a nominal class", lineno)
                in_data = True
                continue
            raise ParseError(f"unexpected header line {line[:40]!r}", lineno)
        values, label = _parse_row(line, lineno, n_numeric + 1)
        if str(label) not in classes:
            raise ParseError(f"class label {label} is not declared", lineno)
        rows.append(values)
        labels.append(label)
    if not in_data:
        raise ParseError("no @data section")
    return rows, labels


def _read_csv(lines):
    width, rows, labels = None, [], []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if width is None:
            width = len(line.split(","))
            if width < 2:
                raise ParseError("header needs at least one value column and a label", lineno)
            continue
        values, label = _parse_row(line, lineno, width)
        rows.append(values)
        labels.append(label)
    if width is None:
        raise ParseError("file is empty")
    return rows, labels


def read_dataset(path, fmt=None):
    """Read one half of a dataset.

    Parameters
    ----------
    path : str or path
    fmt : {"arff", "csv"}, optional
        Inferred from the extension when omitted.

    Returns
    -------
    X : numpy.ndarray, shape (n_series, n)
    y : numpy.ndarray of int

    Raises
    ------
    ParseError
        On empty files, ragged rows or malformed headers; the message names
        the line.
    """
    path = Path(path)
    fmt = _format(fmt or path.suffix.lstrip("."))
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not any(line.strip() for line in lines):
        raise ParseError(f"{path} is empty")
    rows, labels = (_read_arff if fmt == "arff" else _read_csv)(lines)
    if not rows:
        raise ParseError(f"{path} has no data rows")
    return np.asarray(rows, dtype=float), np.asarray(labels, dtype=int)


def read_dataset_pair(prefix, fmt="arff"):
    """Read ``<prefix>_TRAIN`` and ``<prefix>_TEST`` back into a :class:`DatasetPair`."""
    fmt = _format(fmt)
    X_train, y_train = read_dataset(str(prefix) + "_TRAIN" + _EXT[fmt], fmt)
    X_test, y_test = read_dataset(str(prefix) + "_TEST" + _EXT[fmt], fmt)
    return DatasetPair(X_train, y_train, X_test, y_test, meta={"source": str(prefix)})


# ---------------------------------------------------------------------------
# results documents


def dumps_results(doc):
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_results(doc, path):
    validate_results(doc)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_results(doc))
    return Path(path)


def validate_results(doc):
    """Check schema version, rectangularity and accuracy ranges.

    Raises
    ------
    SchemaVersionError
        When the document is not a version-1 results document.
    ValidationError
        When a cell is missing or an accuracy falls outside [0, 1]; the
        message names the simulator, resample and classifier.
    """
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_NAME:
        raise SchemaVersionError("not a tscsim results document")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"results schema version {version!r} is not supported (expected {SCHEMA_VERSION})"
        )
    classifiers = doc.get("classifiers") or []
    if len(classifiers) < 1:
        raise ValidationError("results document lists no classifiers")
    for cell in doc.get("cells", []):
        where = f"simulator={cell.get('simulator')} resample={cell.get('resample')}"
        results = cell.get("results", {})
        for name in classifiers:
            if name not in results:
                raise ValidationError(f"missing cell {where} classifier={name}")
            entry = results[name]
            acc = entry.get("accuracy")
            if acc is None:
                if not entry.get("error"):
                    raise ValidationError(f"cell {where} classifier={name} has neither accuracy nor error")
                continue
            if not isinstance(acc, (int, float)) or not 0.0 <= acc <= 1.0:
                raise ValidationError(f"accuracy {acc!r} out of range in cell {where} classifier={name}")
    return doc


def read_results(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return validate_results(doc)


def strip_timing(doc):
    """Deep copy of ``doc`` with the wall-clock fields removed."""
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k not in TIMING_FIELDS}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc
