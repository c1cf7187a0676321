/* tslint:disable */
/* eslint-disable */

/**
 * Closed forms against exact diagonalization at three couplings.
 */
export function oracle_check(omega1: number, omega2: number, e0: number, lambda: number, nmax: number, with_rwa: boolean): string;

/**
 * Single-point report.
 */
export function point_report(omega1: number, omega2: number, e0: number, lambda: number): string;

/**
 * Measures along a grid of post-switch frequencies.
 */
export function sweep_curves(omega1: number, e0: number, lambda: number, omega2_min: number, omega2_max: number, steps: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly oracle_check: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly point_report: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly sweep_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
