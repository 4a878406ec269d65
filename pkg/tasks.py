import os

from invoke import task

from entanglement_transfer.reproduction.presets import PRESETS


def _run_preset(ctx, name, out_dir, units, jobs):
    out = os.path.join(out_dir or os.environ.get("OUTPUT_DIR", "results"), f"{name}.csv")
    command = f"entanglement-sweep --preset {name} --out {out}"
    if units:
        command += f" --units {units}"
    if jobs:
        command += f" --jobs {jobs}"
    print(f"Running preset '{name}' into {out}")
    ctx.run(command)


@task
def sweep(ctx, preset, out_dir=None, units=None, jobs=None):
    if preset not in PRESETS:
        print(f"Unknown preset '{preset}'. Available presets: {', '.join(PRESETS)}")
        return
    _run_preset(ctx, preset, out_dir, units, jobs)


@task
def figures(ctx, out_dir=None, units=None, jobs=None):
    for name in PRESETS:
        _run_preset(ctx, name, out_dir, units, jobs)
    print("All presets completed")


@task
def plot(ctx, out_dir=None):
    out_dir = out_dir or os.environ.get("OUTPUT_DIR", "results")
    for name in PRESETS:
        script = os.path.join(out_dir, f"{name}.gp")
        if not os.path.exists(script):
            print(f"No plot script for '{name}', run the preset first")
            continue
        ctx.run(f"cd {out_dir} && gnuplot -persist {name}.gp")
