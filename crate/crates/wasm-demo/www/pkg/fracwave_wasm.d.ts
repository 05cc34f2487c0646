/* tslint:disable */
/* eslint-disable */

/**
 * Rows `(x, u)` of the 1D periodic solution with Dirichlet datum a Gaussian and
 * Neumann datum a Ricker bump, both of the given width.
 */
export function bessel_solution_1d(sigma: number, t: number, n: number, box_length: number, width: number): Float64Array;

/**
 * Rows `(x, u, mean)`: the kernel solution with Neumann datum a Ricker bump of
 * the given width, and the spherical mean it tends to, along the first axis.
 */
export function kernel_profile(d: number, sigma: number, t: number, width: number, half_span: number, count: number): Float64Array;

/**
 * Rows `(lambda, re, im)` of `I_sigma(lambda, t)` for `lambda` in `[0, lambda_max]`.
 */
export function symbol_curve(sigma: number, t: number, lambda_max: number, count: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bessel_solution_1d: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly kernel_profile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly symbol_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
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
