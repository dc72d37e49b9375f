// Just the slices of the node runtime this package touches, so the only dev
// dependencies stay typescript and vitest. Node 20 provides the real thing.

declare module "node:fs" {
  export function readFileSync(path: string, encoding: "utf8"): string;
  export function writeFileSync(path: string, data: string | Uint8Array): void;
  export function mkdtempSync(prefix: string): string;
  export function existsSync(path: string): boolean;
  export function readdirSync(path: string): string[];
}

declare module "node:os" {
  export function tmpdir(): string;
}

declare module "node:path" {
  export function join(...parts: string[]): string;
  export function dirname(path: string): string;
}

declare module "node:zlib" {
  export function deflateSync(data: Uint8Array): Uint8Array;
  export function inflateSync(data: Uint8Array): Uint8Array;
}

declare const process: {
  argv: string[];
  cwd(): string;
  exit(code?: number): never;
  stderr: { write(chunk: string): boolean };
  stdout: { write(chunk: string): boolean };
};

declare const Buffer: {
  from(data: Uint8Array): Uint8Array & { toString(encoding: "base64"): string };
  from(data: string, encoding: "base64"): Uint8Array;
};
