"""Small helpers shared by the experiment scripts."""

from pathlib import Path


def write_result(result, outdir, stem):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.csv").write_text(result.to_csv())
    (out / f"{stem}.qq.csv").write_text(result.qq_csv())
    (out / f"{stem}.hist.csv").write_text(result.hist_csv())
    (out / f"{stem}.json").write_text(result.to_json() + "\n")
    return out


def print_steps(result, label):
    print(f"{label}")
    print("  step   mean    1/k     se      median  KS D    KS@1%")
    for s in result.summaries:
        print(f"  {s.step:>4}  {s.mean:.4f}  {s.mu:.4f}  {s.se:.4f}  {s.median:.4f}  {s.ks_d:.4f}  "
              f"{'pass' if s.ks_pass_1pct else 'FAIL'}")
