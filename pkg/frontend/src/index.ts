/**
 * Scripting bindings for the heralded-state simulation toolkit.
 *
 * Every function shells out to the core command-line interface and exchanges
 * JSON, so there is no numerical logic in this layer and the two surfaces
 * cannot drift.  Values come back as native arrays of { re, im } pairs plus
 * plain numbers.
 */

import { execFileSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const VERSION = "0.1.0";

export interface Complex {
  re: number;
  im: number;
}

export interface SqueezeParam {
  r: number;
  phase?: number;
}

export interface MeshElement {
  i: number;
  j: number;
  theta?: number;
  phi?: number;
}

export interface CircuitConfig {
  modes: number;
  squeeze?: SqueezeParam[];
  displace?: Complex[];
  interferometer?: { mesh?: MeshElement[]; unitary?: Complex[][] };
}

export interface PatternConfig {
  detected: number[];
  counts: number[];
}

export interface TargetConfig {
  kind: "cat" | "gkp" | "cubic" | "w" | "noon" | "custom";
  params?: Record<string, unknown>;
}

export interface GaussianStateResult {
  modes: number;
  cov: Complex[][];
  disp: Complex[];
}

export interface HeraldedStateResult {
  zeta: Complex;
  beta: Complex;
  coeffs: Complex[];
  probability: number;
  n_max: number;
  path: string;
}

export interface FockAmplitude {
  idx: number[];
  re: number;
  im: number;
}

export interface FockStateResult {
  state: { modes: number; cutoff: number[]; amps: FockAmplitude[] };
  probability: number;
}

export type RenderedTarget =
  | { kind: "coeffs"; coeffs: Complex[] }
  | { kind: "fock"; state: { modes: number; cutoff: number[]; amps: FockAmplitude[] } };

export type FidelityOperand =
  | { target: TargetConfig }
  | { coeffs: (Complex | number)[] }
  | { fock: { modes: number; cutoff: number[]; amps: FockAmplitude[] } };

export interface DesignResult {
  circuit: unknown;
  pattern: PatternConfig;
  fidelity: number;
  probability: number;
  feasible: boolean;
  trace: Record<string, unknown>;
}

export interface OptimizeOptions {
  fidelity_floor?: number;
  restarts?: number;
  rounds?: number;
  maxiter?: number;
  allow_displacement?: boolean;
  warm_start?: boolean;
  seed?: number;
}

export class CoreError extends Error {
  constructor(message: string, public readonly exitCode: number) {
    super(message);
    this.name = exitCode === 3 ? "NumericalGuardError" : "ConfigurationError";
  }
}

/** Command used to reach the core; override for custom environments. */
export interface BindingOptions {
  command?: string[];
}

const DEFAULT_COMMAND = ["python3", "-m", "heraldkit.cli"];

function invoke(
  subcommand: string[],
  config: Record<string, unknown>,
  options?: BindingOptions,
): Record<string, unknown> {
  const command = options?.command ?? DEFAULT_COMMAND;
  const dir = mkdtempSync(join(tmpdir(), "heraldkit-"));
  const configPath = join(dir, "config.json");
  try {
    writeFileSync(configPath, JSON.stringify(config));
    const args = [...command.slice(1), ...subcommand, "--config", configPath];
    let stdout: string;
    try {
      stdout = execFileSync(command[0], args, { encoding: "utf8" });
    } catch (err) {
      const e = err as { status?: number; stderr?: string | Buffer };
      const detail = (e.stderr ?? "").toString().trim();
      throw new CoreError(detail || "core invocation failed", e.status ?? 1);
    }
    return JSON.parse(stdout) as Record<string, unknown>;
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function call(
  fn: string,
  config: Record<string, unknown>,
  options?: BindingOptions,
): Record<string, unknown> {
  return invoke(["call", fn], config, options);
}

/** Pure Gaussian state of a circuit: covariance and displacement tables. */
export function makeState(
  circuit: CircuitConfig,
  options?: BindingOptions,
): GaussianStateResult {
  return call("make_state", { circuit }, options) as unknown as GaussianStateResult;
}

/** Conditional single-mode state after photon-number detection. */
export function herald(
  circuit: CircuitConfig,
  pattern: PatternConfig,
  options?: BindingOptions,
): HeraldedStateResult {
  return call("herald", { circuit, pattern }, options) as unknown as HeraldedStateResult;
}

/** Brute-force amplitude-table herald over the unmeasured modes. */
export function heraldedFock(
  circuit: CircuitConfig,
  pattern: PatternConfig,
  cutoff?: number,
  options?: BindingOptions,
): FockStateResult {
  const config: Record<string, unknown> = { circuit, pattern };
  if (cutoff !== undefined) config.cutoff = cutoff;
  return call("heralded_fock", config, options) as unknown as FockStateResult;
}

/** Normalized Fock rendering of a named target state. */
export function renderTarget(
  target: TargetConfig,
  options?: BindingOptions,
): RenderedTarget {
  return call("render_target", { target }, options) as unknown as RenderedTarget;
}

/** Squared overlap of two states given as specs, coefficients or tables. */
export function fidelity(
  a: FidelityOperand,
  b: FidelityOperand,
  options?: BindingOptions,
): number {
  const doc = call("fidelity", { a, b }, options);
  return doc.fidelity as number;
}

/** Probability-maximizing circuit search under a fidelity floor. */
export function optimizeCircuit(
  target: TargetConfig,
  modes: number,
  pattern: PatternConfig,
  opts?: OptimizeOptions,
  options?: BindingOptions,
): DesignResult {
  const config: Record<string, unknown> = { target, modes, pattern, ...(opts ?? {}) };
  return call("optimize_circuit", config, options) as unknown as DesignResult;
}

/** Version string reported by the core command-line interface. */
export function coreVersion(options?: BindingOptions): string {
  const command = options?.command ?? DEFAULT_COMMAND;
  const out = execFileSync(command[0], [...command.slice(1), "--version"], {
    encoding: "utf8",
  });
  return out.trim();
}

/** Raw access to the herald subcommand (same document the CLI emits). */
export function heraldRaw(
  config: Record<string, unknown>,
  options?: BindingOptions,
): Record<string, unknown> {
  return invoke(["herald"], config, options);
}
