#!/usr/bin/env python3
"""Writes a small driver-stop model: two adder threads and one stopper.

Shared state: stopping flag, stop event, stopped bit, pending I/O counter.
Adders atomically check the flag and increment the counter, do some work,
then call a decrement routine. The stopper raises the flag, calls the
decrement routine, waits for the event and marks the driver stopped.
Bad: an adder doing work while the driver is stopped.

With --racy the adder reads the flag and increments the counter in two
separate steps, which lets it start work after the driver stopped.

Usage: gen_bluetooth_toy.py [--racy] [OUTPUT]
"""
import itertools
import sys

MAX_IO = 3


def name(f, e, s, p):
    return f"f{f}e{e}s{s}p{p}"


STATES = list(itertools.product((0, 1), (0, 1), (0, 1), range(MAX_IO + 1)))


def decrement_rules():
    rules = []
    for f, e, s, p in STATES:
        if p == 0:
            continue
        e2 = 1 if p == 1 else e
        rules.append(f"  ({name(f, e, s, p)}, d0) -> ({name(f, e2, s, p - 1)}, eps);")
    return rules


def adder(idx, racy):
    rules = []
    for f, e, s, p in STATES:
        q = name(f, e, s, p)
        if f == 1:
            rules.append(f"  ({q}, a0) -> ({q}, a4);")
        elif racy:
            rules.append(f"  ({q}, a0) -> ({q}, a1);")
        elif p < MAX_IO:
            rules.append(f"  ({q}, a0) -> ({name(f, e, s, p + 1)}, a2);")
        if racy and p < MAX_IO:
            rules.append(f"  ({q}, a1) -> ({name(f, e, s, p + 1)}, a2);")
    rules.append("  (*, a2) -> (*, a3);")
    rules.append("  (*, a3) -> (*, d0 a4);")
    rules += decrement_rules()
    return [f"thread adder{idx} {{", "  alphabet: a0 a1 a2 a3 a4 d0;"] + rules + ["}"]


def stopper():
    rules = []
    for f, e, s, p in STATES:
        rules.append(f"  ({name(f, e, s, p)}, s0) -> ({name(1, e, s, p)}, s1);")
    rules.append("  (*, s1) -> (*, d0 s2);")
    for f, e, s, p in STATES:
        if e == 1:
            rules.append(f"  ({name(f, e, s, p)}, s2) -> ({name(f, e, 1, p)}, s3);")
    rules += decrement_rules()
    return ["thread stopper {", "  alphabet: s0 s1 s2 s3 d0;"] + rules + ["}"]


def main():
    args = sys.argv[1:]
    racy = "--racy" in args
    args = [a for a in args if a != "--racy"]
    out = [
        "# Generated by tools/gen_bluetooth_toy.py%s; do not edit by hand." % (" --racy" if racy else ""),
        "shared: " + " ".join(name(*t) for t in STATES) + ";",
        f"init: {name(0, 0, 0, 1)} | a0, a0, s0;",
        "",
    ]
    out += adder(1, racy) + [""] + adder(2, racy) + [""] + stopper() + [""]
    for f, e, s, p in STATES:
        if s == 1:
            out.append(f"bad: ({name(f, e, s, p)} | a2, *, *);")
            out.append(f"bad: ({name(f, e, s, p)} | *, a2, *);")
    text = "\n".join(out) + "\n"
    if args:
        with open(args[0], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
