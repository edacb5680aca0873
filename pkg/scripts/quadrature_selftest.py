"""Print the quadrature self-test battery: value, error estimate, true error."""
import sys

from hyperverify.transforms import self_test


def main():
    rows = self_test()
    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'estimate':>9}  {'true err':>9}  ok")
    for name, _, est, true, ok in rows:
        print(f"{name:<{width}}  {est:9.1e}  {true:9.1e}  {'yes' if ok else 'NO'}")
    return 0 if all(r[-1] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
