/**
 * Node bindings for the shapesig toolkit.
 *
 * Every numeric result comes from the shapesig command-line interface; this
 * module only marshals arrays and files, so there is a single source of
 * numerical truth and binding outputs are bit-identical to CLI outputs.
 *
 * The Python interpreter is resolved from SHAPESIG_PYTHON (default
 * "python3") and must have the shapesig package installed.
 */
import { spawnSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';

/** Oriented box annotation: center meters, size (w, l, h) meters, yaw radians. */
export interface Box {
  center: [number, number, number];
  size: [number, number, number];
  yaw: number;
}

/** Point rows: arrays of [x, y, z] or [x, y, z, intensity] (intensity ignored),
 * or a flat typed array with an explicit column count. */
export type PointsInput =
  | ArrayLike<number>[]
  | { data: ArrayLike<number>; cols: 3 | 4 };

/** Options forwarded to the signature pipeline. */
export interface SignatureOptions {
  symmetry?: 'planar' | 'full3d';
  degree?: number;
  k?: number;
  minPoints?: number;
  python?: string;
}

export interface BatchObject {
  points: PointsInput;
  box: Box;
  label: string;
}

export interface BatchResult {
  /** One Float64Array of 3k coefficients per input row. */
  signatures: Float64Array[];
  /** True where the class prototype was substituted for a degenerate box. */
  usedPrototype: boolean[];
}

export interface PrototypeEntry {
  count: number;
  k: number;
  values: number[];
}

export interface PrototypeTable {
  classes: Record<string, PrototypeEntry>;
}

/** Invalid arguments crossing the binding boundary (wrong shape, NaN, ...). */
export class ArgumentError extends Error {}

/** The box has too few points to model shape; substitute the class mean. */
export class DegenerateBoxError extends Error {
  /** Class whose prototype should be substituted, when known. */
  readonly label: string | undefined;
  constructor(message: string, label?: string) {
    super(message);
    this.label = label;
  }
}

/** A degenerate batch row whose class has no prototype. */
export class UnresolvableRowError extends Error {
  readonly row: number;
  constructor(message: string, row: number) {
    super(message);
    this.row = row;
  }
}

/** The CLI failed for a reason other than a degenerate box. */
export class CliError extends Error {
  readonly exitCode: number;
  constructor(message: string, exitCode: number) {
    super(message);
    this.exitCode = exitCode;
  }
}

function toRows(points: PointsInput): number[][] {
  let rows: number[][];
  if (Array.isArray(points)) {
    rows = points.map((row, i) => {
      const r = Array.from(row as ArrayLike<number>);
      if (r.length !== 3 && r.length !== 4) {
        throw new ArgumentError(`point row ${i} has ${r.length} values, want 3 or 4`);
      }
      return r.slice(0, 3);
    });
  } else {
    const { data, cols } = points;
    if (data.length % cols !== 0) {
      throw new ArgumentError(`flat array length ${data.length} not divisible by ${cols}`);
    }
    rows = [];
    for (let i = 0; i < data.length; i += cols) {
      rows.push([data[i], data[i + 1], data[i + 2]]);
    }
  }
  for (const [i, row] of rows.entries()) {
    if (!row.every(Number.isFinite)) {
      throw new ArgumentError(`non-finite coordinate in point row ${i}`);
    }
  }
  return rows;
}

function writePointsCsv(file: string, rows: number[][]): void {
  // String(x) is the shortest round-trip decimal, so Python reparses the
  // exact same doubles
  const body = rows.map((r) => `${r[0]},${r[1]},${r[2]}`).join('\n');
  fs.writeFileSync(file, rows.length ? body + '\n' : '');
}

function annotationRecord(id: string, label: string, box: Box): object {
  if (box.center.length !== 3 || box.size.length !== 3) {
    throw new ArgumentError('box center and size must have three components');
  }
  if (![...box.center, ...box.size, box.yaw].every(Number.isFinite)) {
    throw new ArgumentError('box fields must be finite');
  }
  return {
    id,
    label,
    center: box.center,
    size: box.size,
    yaw: box.yaw,
    frame: 't0',
  };
}

function configFlags(opts: SignatureOptions): string[] {
  const flags: string[] = [];
  if (opts.symmetry) flags.push('--sym', opts.symmetry);
  if (opts.degree !== undefined) flags.push('--degree', String(opts.degree));
  if (opts.k !== undefined) flags.push('--k', String(opts.k));
  if (opts.minPoints !== undefined) flags.push('--min-points', String(opts.minPoints));
  return flags;
}

function runCli(args: string[], opts: SignatureOptions): string {
  const python = opts.python ?? process.env.SHAPESIG_PYTHON ?? 'python3';
  const proc = spawnSync(python, ['-m', 'shapesig', ...args], {
    encoding: 'utf-8',
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error) throw proc.error;
  if (proc.status !== 0) {
    const err = (proc.stderr || '').trim();
    if (/degenerate/.test(err)) {
      const label = /class '([^']*)'/.exec(err)?.[1];
      const row = /at row (\d+)/.exec(err)?.[1];
      if (row !== undefined) throw new UnresolvableRowError(err, Number(row));
      throw new DegenerateBoxError(err, label);
    }
    throw new CliError(err || `shapesig exited with ${proc.status}`, proc.status ?? -1);
  }
  return proc.stdout;
}

function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'shapesig-'));
  try {
    return fn(dir);
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}

function parseTable(csv: string): { vectors: Float64Array[]; sources: string[] } {
  const lines = csv.split('\n').filter((l) => l.length > 0);
  const header = lines[0].split(',');
  const hasSource = header[header.length - 1] === 'source';
  const valueCols = header.length - 2 - (hasSource ? 1 : 0);
  const vectors: Float64Array[] = [];
  const sources: string[] = [];
  for (const line of lines.slice(1)) {
    const fields = line.split(',');
    vectors.push(Float64Array.from(fields.slice(2, 2 + valueCols), Number));
    if (hasSource) sources.push(fields[fields.length - 1]);
  }
  return { vectors, sources };
}

/**
 * Shape signature of a single annotated object: 3k floats, bit-identical to
 * `shapesig compute`. Throws DegenerateBoxError when the box holds too few
 * points; pass `prototypes` to substitute the class mean instead.
 */
export function computeSignature(
  points: PointsInput,
  box: Box,
  options: SignatureOptions & { label?: string; prototypes?: PrototypeTable | string } = {},
): Float64Array {
  const rows = toRows(points);
  return withTempDir((dir) => {
    const pointsFile = path.join(dir, 'obj.csv');
    const annFile = path.join(dir, 'ann.json');
    writePointsCsv(pointsFile, rows);
    const label = options.label ?? 'object';
    fs.writeFileSync(annFile, JSON.stringify([annotationRecord('obj', label, box)]));
    const args = ['compute', '--points', pointsFile, '--ann', annFile, '--id', 'obj'];
    if (options.prototypes !== undefined) {
      args.push('--prototypes', materializeTable(dir, options.prototypes));
    }
    args.push(...configFlags(options));
    const out = runCli(args, options).trim();
    return Float64Array.from(out.split(/\s+/), Number);
  });
}

function materializeTable(dir: string, table: PrototypeTable | string): string {
  if (typeof table === 'string') return table;
  const file = path.join(dir, 'prototypes.json');
  fs.writeFileSync(file, JSON.stringify(table));
  return file;
}

function writeDataset(dir: string, objects: BatchObject[]): { pointsDir: string; annFile: string } {
  const pointsDir = path.join(dir, 'points');
  fs.mkdirSync(pointsDir);
  const records: object[] = [];
  objects.forEach((obj, i) => {
    writePointsCsv(path.join(pointsDir, `${i}.csv`), toRows(obj.points));
    records.push(annotationRecord(String(i), obj.label, obj.box));
  });
  const annFile = path.join(dir, 'ann.json');
  fs.writeFileSync(annFile, JSON.stringify(records));
  return { pointsDir, annFile };
}

/**
 * Signatures for a whole dataset via `shapesig batch`. Rows come back in
 * input order with a mask of prototype substitutions. A degenerate row whose
 * class is missing from `prototypes` raises UnresolvableRowError with the
 * offending row index.
 */
export function batchSignatures(
  objects: BatchObject[],
  prototypes?: PrototypeTable | string,
  options: SignatureOptions = {},
): BatchResult {
  return withTempDir((dir) => {
    const { pointsDir, annFile } = writeDataset(dir, objects);
    const outFile = path.join(dir, 'table.csv');
    const args = ['batch', '--points', pointsDir, '--ann', annFile, '--out', outFile];
    if (prototypes !== undefined) {
      args.push('--prototypes', materializeTable(dir, prototypes));
    }
    args.push(...configFlags(options));
    runCli(args, options);
    const { vectors, sources } = parseTable(fs.readFileSync(outFile, 'utf-8'));
    return {
      signatures: vectors,
      usedPrototype: sources.map((s) => s === 'prototype'),
    };
  });
}

/** Per-class mean signatures via `shapesig prototypes`. */
export function buildPrototypes(
  objects: BatchObject[],
  options: SignatureOptions = {},
): PrototypeTable {
  return withTempDir((dir) => {
    const { pointsDir, annFile } = writeDataset(dir, objects);
    const outFile = path.join(dir, 'prototypes.json');
    const args = ['prototypes', '--points', pointsDir, '--ann', annFile, '--out', outFile,
                  ...configFlags(options)];
    runCli(args, options);
    return JSON.parse(fs.readFileSync(outFile, 'utf-8')) as PrototypeTable;
  });
}

export interface FocalOptions {
  alphaT?: number;
  gamma?: number;
  clamp?: boolean;
  python?: string;
}

/** Focal classification loss and its derivative at class probability p. */
export function focalLoss(p: number, options: FocalOptions = {}): { loss: number; grad: number } {
  if (!Number.isFinite(p)) throw new ArgumentError('p must be finite');
  const args = ['loss', 'focal', '--p', String(p)];
  if (options.alphaT !== undefined) args.push('--alpha', String(options.alphaT));
  if (options.gamma !== undefined) args.push('--gamma', String(options.gamma));
  if (options.clamp) args.push('--clamp');
  const [loss, grad] = runCli(args, options).trim().split(/\s+/).map(Number);
  return { loss, grad };
}

/** Smooth L1 loss and gradient: quadratic below unit residual, linear above. */
export function smoothL1(x: number, options: { python?: string } = {}): { loss: number; grad: number } {
  if (!Number.isFinite(x)) throw new ArgumentError('x must be finite');
  const [loss, grad] = runCli(['loss', 'smooth-l1', '--x', String(x)], options)
    .trim()
    .split(/\s+/)
    .map(Number);
  return { loss, grad };
}

export interface TotalLossWeights {
  beta1?: number;
  beta2?: number;
  beta3?: number;
  python?: string;
}

/** Weighted sum of classification, localization, and shape losses. */
export function totalLoss(
  cls: number,
  loc: number,
  shape: number,
  weights: TotalLossWeights = {},
): number {
  const args = ['loss', 'total', '--cls', String(cls), '--loc', String(loc),
                '--shape', String(shape)];
  if (weights.beta1 !== undefined) args.push('--b1', String(weights.beta1));
  if (weights.beta2 !== undefined) args.push('--b2', String(weights.beta2));
  if (weights.beta3 !== undefined) args.push('--b3', String(weights.beta3));
  return Number(runCli(args, weights).trim());
}
