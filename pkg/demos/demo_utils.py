"""Small shared helpers for the demo scripts."""
import os

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")


def get_pyplot():
    """Return pyplot with a headless backend, or None if unavailable."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        return plt
    except ImportError:
        print("(matplotlib not installed, skipping figures)")
        return None


def save_figure(plt, filename):
    os.makedirs(OUT_DIR, exist_ok=True)
    path = os.path.join(OUT_DIR, filename)
    plt.savefig(path, dpi=120)
    plt.close("all")
    print(f"figure saved to {path}")
