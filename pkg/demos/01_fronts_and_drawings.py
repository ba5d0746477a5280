# Pareto fronts of drawing sizes for small complete ternary trees.
#
# Each level's front lists the grid sizes (w, h) that a symmetric 1-2 drawing
# can reach without being beaten in both directions. The witnesses are
# rebuilt from provenance and drawn.

# %%
from ternary_area.drawing import generate, predicted_size, render, validate
from ternary_area.pareto import compute_fronts, witness

fronts = compute_fronts(6)
for f in fronts:
    print(f.level, f.points()[:6], "..." if len(f) > 6 else "")

# %%
# Level 3 has two incomparable sizes; construction 2 gives the taller one.
f3 = fronts[2]
for i, (w, h) in enumerate(f3.points()):
    tree = witness(fronts, 3, i)
    print(f"({w}, {h}) from {tree!r}")
    print(render(generate(tree), "ascii"))

# %%
# Every witness regenerates exactly its claimed size and passes all seven checks.
bad = 0
for f in fronts:
    for i, size in enumerate(f.points()):
        d = generate(witness(fronts, f.level, i))
        bad += (d.width, d.height) != size or not validate(d).predicate
print("mismatches:", bad)
