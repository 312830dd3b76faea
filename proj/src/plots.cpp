#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "east/experiments.hpp"

namespace eastsim {

namespace {

void write_script(const std::string& dir, const std::string& name,
                  const std::string& body) {
  std::ofstream os(dir + "/" + name);
  if (!os) throw std::runtime_error("cannot write plot script " + name);
  os << "#!/usr/bin/env python3\n"
     << "# Reads the CSVs produced by the experiment runners in this\n"
     << "# directory; skips anything that has not been generated yet.\n"
     << "import csv, glob, os, sys\n"
     << "import matplotlib\n"
     << "matplotlib.use('Agg')\n"
     << "import matplotlib.pyplot as plt\n\n"
     << "def load(path):\n"
     << "    with open(path) as f:\n"
     << "        rows = list(csv.reader(f))\n"
     << "    return rows[0], [[float(c) if c not in ('', 'ok') and not "
        "c.startswith('failed') else c for c in r] for r in rows[1:]]\n\n"
     << body;
}

}  // namespace

void emit_plots(const std::string& results_dir) {
  if (!std::filesystem::is_directory(results_dir))
    throw std::runtime_error("results directory not found: " + results_dir);

  write_script(results_dir, "plot_fig1.py", R"PY(
fig, ax = plt.subplots()
for path in sorted(glob.glob('fig1b_profile_D*.csv')) or []:
    hdr, rows = load(path)
    d = path.split('_D')[1].split('.')[0]
    ax.semilogy([r[0] for r in rows], [max(r[1], 1e-16) for r in rows],
                marker='o', label=f'D={d}')
for path in sorted(glob.glob('fig1c_profile_D*.csv')) or []:
    hdr, rows = load(path)
    d = path.split('_D')[1].split('.')[0]
    ax.plot([r[0] for r in rows], [r[1] for r in rows], marker='s',
            label=f'hetero D={d}')
if not ax.lines:
    sys.exit('no fig1 profiles found')
ax.set_xlabel('site i')
ax.set_ylabel('mean occupation')
ax.legend()
fig.savefig('fig1.png', dpi=150)
print('wrote fig1.png')
)PY");

  write_script(results_dir, "plot_fig2.py", R"PY(
if not os.path.exists('fig2_timeseries.csv'):
    sys.exit('fig2_timeseries.csv not found')
hdr, rows = load('fig2_timeseries.csv')
L = sum(1 for h in hdr if h.startswith('n_'))
t = [r[0] for r in rows]
occ = [[r[1 + i] for i in range(L)] for r in rows]
ent = [[r[1 + L + i] for i in range(L - 1)] for r in rows]
fig, axes = plt.subplots(1, 2, figsize=(10, 4))
im0 = axes[0].imshow(occ, aspect='auto', origin='lower',
                     extent=[1, L, t[0], t[-1]], cmap='viridis')
axes[0].set_title('occupation')
fig.colorbar(im0, ax=axes[0])
im1 = axes[1].imshow(ent, aspect='auto', origin='lower',
                     extent=[1, L - 1, t[0], t[-1]], cmap='magma')
axes[1].set_title('bond entropy')
fig.colorbar(im1, ax=axes[1])
for ax in axes:
    ax.set_xlabel('site / bond')
    ax.set_ylabel('t')
fig.tight_layout()
fig.savefig('fig2.png', dpi=150)
ins, axi = plt.subplots()
axi.plot(t, [row[L // 2 - 1] for row in occ], label='n_mid')
axi.plot(t, [row[L // 2 - 1] for row in ent], label='S_mid')
axi.set_xlabel('t')
axi.legend()
ins.savefig('fig2_insets.png', dpi=150)
print('wrote fig2.png fig2_insets.png')
)PY");

  write_script(results_dir, "plot_fig3a.py", R"PY(
if not os.path.exists('fig3a_scan.csv'):
    sys.exit('fig3a_scan.csv not found')
hdr, rows = load('fig3a_scan.csv')
fig, ax = plt.subplots()
for d in sorted({r[0] for r in rows}):
    pts = [(r[1], r[2]) for r in rows if r[0] == d and r[3] == 'ok']
    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker='o',
            label=f'D={int(d)}')
ax.set_xlabel('rho_0')
ax.set_ylabel('S_mid at T')
ax.legend()
fig.savefig('fig3a.png', dpi=150)
print('wrote fig3a.png')
)PY");

  write_script(results_dir, "plot_fig3b.py", R"PY(
if not os.path.exists('fig3b_scan.csv'):
    sys.exit('fig3b_scan.csv not found')
hdr, rows = load('fig3b_scan.csv')
fig, ax = plt.subplots()
ok = [r for r in rows if r[2] == 'ok']
ax.plot([r[0] for r in ok], [r[1] for r in ok], marker='o')
ax.set_xlabel('mu')
ax.set_ylabel('S_mid at T')
fig.savefig('fig3b.png', dpi=150)
if os.path.exists('fig3b_series.csv'):
    hdr, rows = load('fig3b_series.csv')
    fig2, ax2 = plt.subplots()
    for k in range(1, len(hdr)):
        ax2.plot([r[0] for r in rows], [r[k] for r in rows],
                 label=hdr[k].replace('S_mid_mu_', 'mu='))
    ax2.set_xlabel('t')
    ax2.set_ylabel('S_mid')
    ax2.legend(fontsize=6)
    fig2.savefig('fig3b_series.png', dpi=150)
print('wrote fig3b.png')
)PY");

  write_script(results_dir, "plot_fig4.py", R"PY(
fig, ax = plt.subplots()
plotted = False
for tag in ('', '_asym'):
    paths = {k: f'fig4_{k}{tag}.csv' for k in ('bipolar', 'east', 'west')}
    if not all(os.path.exists(p) for p in paths.values()):
        continue
    for k, path in paths.items():
        hdr, rows = load(path)
        L = sum(1 for h in hdr if h.startswith('n_'))
        ax.plot([r[0] for r in rows], [r[L + L // 2] for r in rows],
                label=f'{k}{tag}')
    plotted = True
if not plotted:
    sys.exit('no fig4 series found')
ax.set_xlabel('t')
ax.set_ylabel('S_mid')
ax.legend()
fig.savefig('fig4.png', dpi=150)
print('wrote fig4.png')
)PY");
}

}  // namespace eastsim
