/* tslint:disable */
/* eslint-disable */

/**
 * Runs one OULP frame over a static vehicular channel and returns the
 * equalized receiver outputs.
 *
 * Layout: `[bit_errors, bits, re_0, im_0, ...]`.
 */
export function constellation_run(l: number, overlap: number, slots: number, ebn0_db: number, seed: bigint): Float64Array;

/**
 * Filter taps followed by `v_{0,n}` for even slots.
 *
 * Layout: `[len, f_0..f_{len-1}, re(v_0), im(v_0), ...]`.
 */
export function prototype_curves(l: number, overlap: number): Float64Array;

/**
 * The 16-QAM reference points as re/im pairs.
 */
export function reference_points(): Float64Array;

/**
 * `ξ_{κ,ℓ}` for κ, ℓ in `[-radius, radius]`, row-major in ℓ, as re/im pairs.
 */
export function xi_grid(l: number, overlap: number, odd: boolean, radius: bigint): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly constellation_run: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
    readonly prototype_curves: (a: number, b: number) => [number, number, number, number];
    readonly reference_points: () => [number, number];
    readonly xi_grid: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
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
