"""Command-line interface.

Subcommands: keygen, encrypt, decrypt, image-demo, totient, mimics, attack,
verify. Every command validates its inputs and computes its full output in
memory before writing anything, so a failure leaves no partial files.

TSV reports use fixed column orders:

* totient: n, S, brute_S, T_exact, T_lower, T_upper, brute_T, match
* mimics: h, predicted, brute
* image-demo report.tsv: plaintext, pixels, group_distinct, cs_distinct
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path

from . import verify as verify_mod
from .attacks import (
    GroupSpec,
    brute_mimic_set,
    imitation_exponents,
    inverse_pair_attack,
    mimic_set,
    pigeonhole_attack,
    pigeonhole_cost,
    trial_multiplication,
    MAX_PIGEONHOLE_INDEX_SPACE,
)
from .cipher import (
    DEFAULT_INDEX_BITS,
    SymmetricKey,
    cs_encrypt,
    CiphertextBlock,
    derive_sandwich,
    cs_encrypt_body,
    keygen,
    random_unit,
)
from .errors import CRSError
from .fileops import decrypt_bytes, decrypt_pixels_cs, diffusion_report, encrypt_bytes, encrypt_pixels_cs, encrypt_pixels_group
from .formats import Mode, Pgm, decode_sidecar, dump_key, encode_sidecar, load_key, read_pgm
from .modmath import is_prime, mod_inv
from .totients import totient_report

log = logging.getLogger("crsemi")


def make_rng(seed: int | None) -> random.Random:
    return random.Random(seed) if seed is not None else random.SystemRandom()


def parse_range(text: str) -> range:
    lo, sep, hi = text.partition(":")
    if not sep:
        return range(2, int(lo) + 1)
    start, stop = int(lo), int(hi)
    if start < 2 or stop < start:
        raise ValueError(f"bad range {text!r}; expected A:B with 2 <= A <= B")
    if stop - start > 10**6:
        raise ValueError("totient tables are limited to 10^6 rows")
    return range(start, stop + 1)


def write_outputs(files: dict[Path, bytes]) -> None:
    for path, data in files.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)


def emit(text: str, out: str | None) -> None:
    if out:
        write_outputs({Path(out): text.encode()})
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------

def cmd_keygen(args) -> int:
    key = keygen(args.modulus, make_rng(args.seed), args.index_bits)
    if key.modulus.value % 2 == 0:
        log.warning("modulus %d is even; the factor 2 leaves a tiny component, insecure", key.modulus.value)
    write_outputs({Path(args.out): dump_key(key).encode()})
    print(f"wrote {args.out}: modulus {key.modulus.value}, encrypt exponent {key.encrypt_exp}")
    return 0


def _load_key(path: str) -> SymmetricKey:
    return load_key(Path(path).read_text())


def cmd_encrypt(args) -> int:
    key = _load_key(args.key)
    data = Path(args.input).read_bytes()
    stream = encrypt_bytes(data, key, Mode.parse(args.mode), make_rng(args.seed))
    write_outputs({Path(args.out): stream})
    return 0


def cmd_decrypt(args) -> int:
    key = _load_key(args.key)
    raw = Path(args.input).read_bytes()
    if args.sidecar:
        image = read_pgm(raw)
        indices = decode_sidecar(Path(args.sidecar).read_bytes(), key.index_bits)
        pixels = decrypt_pixels_cs(image.pixels, indices, key)
        write_outputs({Path(args.out): Pgm(image.width, image.height, pixels).to_bytes()})
        return 0
    mode = Mode.parse(args.mode) if args.mode else None
    write_outputs({Path(args.out): decrypt_bytes(raw, key, mode)})
    return 0


def cmd_image_demo(args) -> int:
    image = read_pgm(Path(args.input).read_bytes())
    key = SymmetricKey.from_exponent(args.p, args.e, args.s, args.index_bits)
    rng = make_rng(args.seed)
    group = Pgm(image.width, image.height, encrypt_pixels_group(image.pixels, key))
    bodies, indices = encrypt_pixels_cs(image.pixels, key, rng)
    cs = Pgm(image.width, image.height, bodies)
    if decrypt_pixels_cs(bodies, indices, key) != image.pixels:
        raise CRSError("internal round-trip failure in image demo")
    rows = diffusion_report(image, group, cs)
    report = "plaintext\tpixels\tgroup_distinct\tcs_distinct\n" + "".join(
        f"{r.plaintext}\t{r.pixels}\t{r.group_distinct}\t{r.cs_distinct}\n" for r in rows
    )
    out = Path(args.out)
    plain = Pgm(image.width, image.height, image.pixels, image.maxval)
    write_outputs({
        out / "original.pgm": plain.to_bytes(),
        out / "group.pgm": group.to_bytes(),
        out / "cs.pgm": cs.to_bytes(),
        out / "cs.idx": encode_sidecar(indices, key.index_bits),
        out / "demo.key": dump_key(key).encode(),
        out / "report.tsv": report.encode(),
    })
    print(f"p={args.p} e={args.e} s={args.s}: {len(rows)} grey levels")
    for r in rows[:10]:
        print(f"  level {r.plaintext:3d} x{r.pixels}: group {r.group_distinct} distinct, cs {r.cs_distinct} distinct")
    return 0


def cmd_totient(args) -> int:
    lines = ["n\tS\tbrute_S\tT_exact\tT_lower\tT_upper\tbrute_T\tmatch"]
    bad = 0
    for n in parse_range(args.range):
        rep = totient_report(n)
        s_col = "" if n % 2 == 0 else str(rep.s_value)
        exact = "" if rep.t_exact is None else str(rep.t_exact)
        lo, hi = ("", "") if rep.t_bounds is None else map(str, rep.t_bounds)
        bad += not rep.matches
        lines.append(f"{n}\t{s_col}\t{rep.brute_s}\t{exact}\t{lo}\t{hi}\t{rep.brute_t}\t{'yes' if rep.matches else 'NO'}")
    emit("\n".join(lines) + "\n", args.out)
    return 1 if bad else 0


def _group_for(p: int, order: int | None) -> GroupSpec:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return GroupSpec.subgroup(p, order) if order else GroupSpec.unit_group(p)


def cmd_mimics(args) -> int:
    G = _group_for(args.p, args.order)
    if not G.contains(args.g):
        raise ValueError(f"{args.g} is not in the order-{G.order} subgroup of U_{G.p}")
    predicted = mimic_set(args.g, G)
    parity = "odd" if G.order % 2 else "even"
    print(f"G: order {G.order} ({parity}) in U_{G.p}; mimics of {args.g}: {{{', '.join(map(str, sorted(predicted)))}}}")
    if args.out:
        # brute force: instance n = 1 encrypts g to itself
        brute = brute_mimic_set(args.g, G)
        lines = ["h\tpredicted\tbrute"] + [
            f"{h}\t{int(h in predicted)}\t{int(h in brute)}" for h in G.elements()
        ]
        emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_attack(args) -> int:
    rng = make_rng(args.seed)
    p = args.modulus
    if not is_prime(p):
        raise ValueError("attacks run over U_p for a prime modulus")
    G = GroupSpec.unit_group(p)
    key = SymmetricKey.from_exponent(p, random_unit(p - 1, rng), rng.getrandbits(64), args.index_bits)
    rows: list[str] = []
    if args.kind == "pigeonhole":
        space = 1 << args.index_bits
        if space > MAX_PIGEONHOLE_INDEX_SPACE:
            print(f"index space 2^{args.index_bits}: ~{pigeonhole_cost(space, G)} dlog steps, infeasible; not run")
            return 0
        res = pigeonhole_attack(lambda g: cs_encrypt(g, key, rng), G, space, rng)
        print(f"recovered exponent {res.exponent} (true {key.encrypt_exp}) after {res.attempts} attempt(s)")
        rows = ["recovered\ttrue\tattempts\tcandidates", f"{res.exponent}\t{key.encrypt_exp}\t{res.attempts}\t{res.candidates}"]
    elif args.kind == "inverse-pair":
        g = random_unit(p, rng)
        i = rng.getrandbits(key.index_bits)
        p_i = derive_sandwich(i, key.secret, p)
        blk = CiphertextBlock(i, cs_encrypt_body(g, p_i, key.encrypt_exp, p))
        blk_inv = CiphertextBlock(i, cs_encrypt_body(mod_inv(g, p), p_i, key.encrypt_exp, p))
        res = inverse_pair_attack(blk, blk_inv, g, p)
        true_gn = pow(g, key.encrypt_exp, p)
        print(f"g={g}: (p_i^(n-1))^2 = {res.sandwich_power_sq}; g^n candidates {list(res.g_power_candidates)} (true {true_gn})")
        rows = ["g\tsq\tg_power_candidates\ttrue_g_power", f"{g}\t{res.sandwich_power_sq}\t{','.join(map(str, res.g_power_candidates))}\t{true_gn}"]
    else:
        g = random_unit(p, rng)
        i = rng.getrandbits(key.index_bits)
        x = cs_encrypt_body(g, derive_sandwich(i, key.secret, p), key.encrypt_exp, p)
        sols = trial_multiplication(g, x, G)
        ms = imitation_exponents(g, x, G)
        print(f"g={g}, c={x}: {len(sols)} (m, q) solutions over {len(ms)} distinct exponents (true n={key.encrypt_exp})")
        rows = ["m\tq"] + [f"{s.m}\t{s.q}" for s in sols]
    if args.out:
        emit("\n".join(rows) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    results = verify_mod.run_suite(args.suite)
    failed = 0
    for r in results:
        failed += not r.passed
        print(f"{'PASS' if r.passed else 'FAIL'}\t{r.suite}\t{r.name}" + (f"\t{r.detail}" if r.detail else ""))
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crsemi", description=__doc__.split("\n\n")[0],
                                     epilog=__doc__.split("\n\n", 2)[2],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a CRSKEY1 key file")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--index-bits", type=int, default=DEFAULT_INDEX_BITS)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a file into a CRS1 stream")
    p.add_argument("input")
    p.add_argument("--key", required=True)
    p.add_argument("--mode", choices=["group", "cs", "crrsa"], default="cs")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a CRS1 stream, or a cs-mode PGM with --sidecar")
    p.add_argument("input")
    p.add_argument("--key", required=True)
    p.add_argument("--mode", choices=["group", "cs", "crrsa"])
    p.add_argument("--sidecar")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("image-demo", help="encrypt a P5 PGM in group and cs modes")
    p.add_argument("input")
    p.add_argument("--p", type=int, default=257)
    p.add_argument("--e", type=int, default=75)
    p.add_argument("--s", type=int, default=201)
    p.add_argument("--index-bits", type=int, default=DEFAULT_INDEX_BITS)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_image_demo)

    p = sub.add_parser("totient", help="tabulate S(n) and T(n) against exhaustive counts")
    p.add_argument("--range", required=True, help="A:B, or B for 2:B")
    p.add_argument("--out")
    p.set_defaults(func=cmd_totient)

    p = sub.add_parser("mimics", help="list the mimics of g in U_p (or its subgroup of --order)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--out", help="TSV comparing prediction with brute force")
    p.set_defaults(func=cmd_mimics)

    p = sub.add_parser("attack", help="run an attack experiment over U_p")
    p.add_argument("kind", choices=["pigeonhole", "inverse-pair", "trial"])
    p.add_argument("--modulus", type=int, default=257)
    p.add_argument("--index-bits", type=int, default=4)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("verify", help="run invariant sweeps; nonzero exit on any violation")
    p.add_argument("suite", nargs="?", default="all", choices=["all", *verify_mod.SUITES])
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (CRSError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
