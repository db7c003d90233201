/* tslint:disable */
/* eslint-disable */

/**
 * Points `(gamma_a(n), gamma_b(n))` for `n = 1..=count`, flattened as `x0, y0, x1, y1, ...`.
 */
export function halton_points(base_a: number, base_b: number, count: number): Float64Array;

/**
 * Exact polyadic distance as `"p/q = decimal"`.
 */
export function polyadic_distance(a: number, b: number): string;

/**
 * Distribution function of `gamma_a + gamma_b` from the convolution of the two
 * window EDFs, sampled at `samples` points of `[0, 2]`. Rows are flattened as
 * `x, convolved, exact`.
 */
export function vdc_sum_cdf(base_a: number, base_b: number, count: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly halton_points: (a: number, b: number, c: number) => [number, number, number, number];
    readonly polyadic_distance: (a: number, b: number) => [number, number];
    readonly vdc_sum_cdf: (a: number, b: number, c: number, d: number) => [number, number, number, number];
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
