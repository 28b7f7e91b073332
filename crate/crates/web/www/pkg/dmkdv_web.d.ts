/* tslint:disable */
/* eslint-disable */

/**
 * Values on consecutive sites starting at `n_min`; `NaN` marks sites
 * where no value could be computed.
 */
export class Series {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly n_min: number;
    readonly values: Float64Array;
}

export function asymptotic(kind: string, amplitude: number, width: number, center: number, t: number): Series;

export function reflection_modulus(kind: string, amplitude: number, width: number, center: number, samples: number): Float64Array;

export function simulate(kind: string, amplitude: number, width: number, center: number, t: number, dt: number): Series;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_series_free: (a: number, b: number) => void;
    readonly asymptotic: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly reflection_modulus: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly series_n_min: (a: number) => number;
    readonly series_values: (a: number) => [number, number];
    readonly simulate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
