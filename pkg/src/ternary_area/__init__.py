"""Area of straight-line orthogonal drawings of complete ternary trees."""
