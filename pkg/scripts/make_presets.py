#!/usr/bin/env python3
"""Regenerate the committed figure presets under src/ommsim/presets/.

Run from the repository root:  python3 scripts/make_presets.py
"""

import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "ommsim" / "presets"

BASE = """\
[modes]
omega_a_over_2pi = 370 THz
omega_b_over_2pi = 10 MHz
omega_A1_over_2pi = 10 GHz
omega_m1_over_2pi = 10 GHz
omega_A2_over_2pi = 10 GHz
omega_m2_over_2pi = 10 GHz
kappa_a = 0.4 omega_b
kappa_b_over_2pi = 100 Hz
kappa_A1 = 0.1 omega_b
kappa_m1 = 0.1 omega_b
kappa_A2 = 0.1 omega_b
kappa_m2 = 0.1 omega_b

[drives]
detuning_convention = effective
rabi_a = 1.43e12 rad/s
rabi_m1 = 7.13e14 rad/s
rabi_m2 = 7.13e14 rad/s
detuning_a = {det_a}
detuning_A1 = {det_A1}
detuning_A2 = {det_A2}
detuning_m1 = {det_m1}
detuning_m2 = {det_m2}

[couplings]
g_ab = {g_ab}
# frozen by the committed calibration (ommsim calibrate-gab)
g_A1b = 0.134 rad/s
g_A2b = 0.134 rad/s
g_1_over_2pi = 1.7 MHz
g_2_over_2pi = 1.7 MHz

[environment]
temperature = 10 mK

"""

LINKED_MW = ("drives.detuning_A1, drives.detuning_A2, "
             "drives.detuning_m1, drives.detuning_m2")


def base(det_a="1 omega_b", det_A1="0 Hz", det_A2="0 Hz",
         det_m1="0 Hz", det_m2="0 Hz", g_ab="1.2 kappa_b"):
    return BASE.format(det_a=det_a, det_A1=det_A1, det_A2=det_A2,
                       det_m1=det_m1, det_m2=det_m2, g_ab=g_ab)


def axis(i, target, start, stop, count, scale="linear"):
    return (f"axis{i} = {target}\n"
            f"axis{i}_start = {start}\n"
            f"axis{i}_stop = {stop}\n"
            f"axis{i}_count = {count}\n"
            f"axis{i}_scale = {scale}\n")


def sweep(pairs, *axes, extras=None):
    text = "[sweep]\n" + f"pairs = {pairs}\n" + "".join(axes)
    if extras:
        text += f"extra_columns = {extras}\n"
    return text


PRESETS = {}

# stability / magnon-magnon entanglement maps over the two cavity detunings
for tag, mult in (("a", 0.8), ("b", 1.0), ("c", 1.2), ("d", 1.4)):
    PRESETS[f"fig2{tag}"] = (
        f"# Stability map and EN(m1,m2) over the optical and microwave\n"
        f"# detunings at g_ab = {mult} kappa_b.\n"
        + base(g_ab=f"{mult} kappa_b")
        + sweep(
            "m1:m2",
            axis(1, "drives.detuning_a", "-2 omega_b", "2 omega_b", 200),
            axis(2, LINKED_MW, "-2 omega_b", "2 omega_b", 200),
        )
    )

PRESETS["fig3"] = (
    "# Thermal robustness of EN(m1,m2) for four optomechanical couplings.\n"
    + base()
    + sweep(
        "m1:m2",
        axis(1, "temperature", "0 mK", "160 mK", 161),
        axis(2, "couplings.g_ab", "0.8 kappa_b", "1.4 kappa_b", 4),
    )
)

PRESETS["fig4"] = (
    "# Four bipartite entanglements against the optical drive detuning.\n"
    + base()
    + sweep(
        "a:b, A1:b, A1:A2, m1:m2",
        axis(1, "drives.detuning_a", "0 Hz", "2 omega_b", 201),
    )
)

for tag, pairs in (("a", "A1:A2"), ("b", "m1:m2"), ("c", "a:b")):
    PRESETS[f"fig5{tag}"] = (
        "# Entanglement over the two microwave drive detunings\n"
        "# (each cavity tied to its magnon).\n"
        + base()
        + sweep(
            pairs,
            axis(1, "drives.detuning_A1, drives.detuning_m1",
                 "-0.6 omega_b", "0.6 omega_b", 121),
            axis(2, "drives.detuning_A2, drives.detuning_m2",
                 "-0.6 omega_b", "0.6 omega_b", 121),
        )
    )

PRESETS["fig5d"] = (
    "# Cut through the maps above with the second drive parked off resonance.\n"
    + base(det_A2="0.15 omega_b", det_m2="0.15 omega_b")
    + sweep(
        "A1:A2, m1:m2, a:b",
        axis(1, "drives.detuning_A1, drives.detuning_m1",
             "-0.6 omega_b", "0.6 omega_b", 241),
    )
)

for tag, pairs in (("a", "A1:A2"), ("b", "m1:m2")):
    PRESETS[f"fig6{tag}"] = (
        "# Cavity detuning against magnon detuning, tuned independently.\n"
        + base()
        + sweep(
            pairs,
            axis(1, "drives.detuning_A1", "-0.6 omega_b", "0.6 omega_b", 121),
            axis(2, "drives.detuning_m1", "-0.6 omega_b", "0.6 omega_b", 121),
        )
    )

for tag, pairs in (("a", "A1:m1"), ("b", "A1:m2"), ("d", "A1:A2"), ("e", "m1:m2")):
    PRESETS[f"fig7{tag}"] = (
        "# Entanglement over the two magnon detunings.\n"
        + base()
        + sweep(
            pairs,
            axis(1, "drives.detuning_m1", "-3 g_1", "3 g_1", 121),
            axis(2, "drives.detuning_m2", "-3 g_1", "3 g_1", 121),
        )
    )

for tag, pairs in (("c", "A1:m1"), ("f", "A1:b")):
    PRESETS[f"fig7{tag}"] = (
        "# Doublet cut: first magnon detuning scanned, second parked at omega_b.\n"
        + base(det_m2="1 omega_b")
        + sweep(
            pairs,
            axis(1, "drives.detuning_m1", "-3 g_1", "3 g_1", 241),
        )
    )

PRESETS["fig8a"] = (
    "# Entanglement against the first microwave cavity linewidth.\n"
    + base()
    .replace("kappa_A2 = 0.1 omega_b", "kappa_A2 = 0.2 omega_b")
    + sweep(
        "A1:m1, A1:A2, m1:m2, A2:m2",
        axis(1, "modes.A1.decay", "0.02 omega_b", "0.6 omega_b", 121),
    )
)

PRESETS["fig8b"] = (
    "# Entanglement against the first magnon linewidth.\n"
    + base()
    + sweep(
        "A1:m1, A1:A2, m1:m2, A2:m2",
        axis(1, "modes.m1.decay", "0.02 omega_b", "0.6 omega_b", 121),
    )
)

PRESETS["fig9a"] = (
    "# First magnon-cavity coupling scanned, second held fixed.\n"
    + base()
    + sweep(
        "A1:A2, m1:m2",
        axis(1, "couplings.g_1", "0.1 MHz", "5 MHz", 99),
        extras="amp_A1",
    )
)

PRESETS["fig9b"] = (
    "# Both magnon-cavity couplings scanned together over a wide log range.\n"
    + base()
    + sweep(
        "m1:m2",
        axis(1, "couplings.g_1, couplings.g_2", "0.1 MHz", "20 MHz", 201,
             scale="log"),
    )
)

DEFAULT = (
    "# Default operating point: red-sideband optical drive, resonant\n"
    "# microwave drives, 10 mK bath.\n"
    + base()
)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "default.cfg").write_text(DEFAULT)
    for name, text in sorted(PRESETS.items()):
        (OUT / f"{name}.cfg").write_text(text)
    print(f"wrote {len(PRESETS) + 1} files to {OUT}")


if __name__ == "__main__":
    main()
