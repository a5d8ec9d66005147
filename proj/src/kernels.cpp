#include "phasemom/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "phasemom/errors.hpp"

namespace phasemom {

namespace {

constexpr std::uint32_t kCacheVersion = 1;
constexpr char kCacheMagic[4] = {'P', 'K', 'T', '1'};

static_assert(std::endian::native == std::endian::little,
              "kernel cache assumes a little-endian host");

// C-infinity taper 1 -> 0 on [0, 1].
double smooth_bump(double u) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / (1.0 - u));
    const double b = std::exp(-1.0 / u);
    return a / (a + b);
}

double window_weight(int n, int n_max) {
    const int half = n_max / 2;
    if (n <= half) return 1.0;
    if (n > n_max) return 0.0;
    return smooth_bump(double(n - half) / double(n_max - half));
}

// Gauge basis: monomials x^j, j < k, j == k (mod 2), orthonormalized on the
// full grid by modified Gram-Schmidt (twice). Zero overlap with every
// psi_a psi_{a+k}, so projecting them out is estimate-neutral.
std::vector<std::vector<double>> gauge_basis(int k, const KernelGridSpec& grid) {
    std::vector<std::vector<double>> basis;
    const std::size_t m = grid.points();
    const double scale = grid.x_at(m - 1);
    for (int j = (k % 2 == 0) ? 0 : 1; j < k; j += 2) {
        std::vector<double> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = std::pow(grid.x_at(i) / scale, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                double dot = 0.0;
                for (std::size_t i = 0; i < m; ++i) dot += v[i] * b[i];
                for (std::size_t i = 0; i < m; ++i) v[i] -= dot * b[i];
            }
        }
        double nrm = 0.0;
        for (double t : v) nrm += t * t;
        nrm = std::sqrt(nrm);
        for (double& t : v) t /= nrm;
        basis.push_back(std::move(v));
    }
    return basis;
}

void project_out(std::vector<double>& f, const std::vector<std::vector<double>>& basis) {
    for (const auto& b : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) dot += f[i] * b[i];
        for (std::size_t i = 0; i < f.size(); ++i) f[i] -= dot * b[i];
    }
}

// Mirror a positive-half accumulation (index 0 at x=0) onto the full grid
// with parity (-1)^k, then force exact parity symmetry.
std::vector<double> mirror_with_parity(const std::vector<double>& half, int k) {
    const std::size_t hp = half.size() - 1;
    std::vector<double> full(2 * hp + 1);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i <= hp; ++i) {
        full[hp + i] = half[i];
        full[hp - i] = sign * half[i];
    }
    if (k % 2 != 0) full[hp] = 0.0;
    return full;
}

struct HalfGridWavefunctions {
    // psi rows for a rolling window of indices; row storage recycled.
    std::size_t count = 0;
    double step = 0.0;
    std::vector<std::vector<double>> rows; // ring buffer
    int top = -1;                          // highest index currently held
    int capacity = 0;

    void init(double step_, std::size_t count_, int capacity_) {
        step = step_;
        count = count_;
        capacity = capacity_;
        rows.assign(static_cast<std::size_t>(capacity), {});
        detail::regular_row0(step, count, slot(0));
        detail::regular_row1(step, count, slot(0), slot(1));
        top = 1;
    }
    std::vector<double>& slot(int n) {
        return rows[static_cast<std::size_t>(n % capacity)];
    }
    const std::vector<double>& row(int n) const {
        return rows[static_cast<std::size_t>(n % capacity)];
    }
    void advance_to(int n) {
        while (top < n) {
            const int next = top + 1;
            // grab the target slot; it still holds row (next - capacity)
            std::vector<double> scratch = std::move(rows[static_cast<std::size_t>(next % capacity)]);
            detail::regular_next(top, step, count, row(top), row(top - 1), scratch);
            rows[static_cast<std::size_t>(next % capacity)] = std::move(scratch);
            ++top;
        }
    }
};

} // namespace

std::size_t KernelGridSpec::half_points() const {
    return static_cast<std::size_t>(std::ceil(x_cut / step - 1e-9));
}

KernelGridSpec default_grid_for_states(int n_state) {
    KernelGridSpec g;
    g.x_cut = std::max(6.0, std::sqrt(2.0 * n_state + 1.0) + 4.0);
    g.x_cut = std::min(g.x_cut, 37.0); // irregular solutions overflow past ~37.5
    g.step = 1e-3;
    g.x_cut = g.step * std::ceil(g.x_cut / g.step - 1e-9);
    return g;
}

double KernelTable::evaluate(double x) const {
    const std::size_t hp = grid.half_points();
    const double xc = grid.x_at(2 * hp);
    if (x <= -xc) return tail_left;
    if (x >= xc) return tail_right;
    const double pos = (x + xc) / grid.step;
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

double KernelTable::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

std::vector<KernelTable> build_phase_kernels(int k_max, int n_max,
                                             const KernelGridSpec& grid,
                                             const KernelOptions& opts) {
    if (k_max < 1) throw DomainError("build_phase_kernels: k_max must be >= 1");
    if (n_max < 16) throw DomainError("build_phase_kernels: n_max must be >= 16");

    const std::size_t hp = grid.half_points();
    const std::size_t count = hp + 1; // positive half including x = 0
    // extra points past x_cut so the last tabulated derivative uses a full
    // interior stencil
    const std::size_t count_build = count + 4;
    const double h = grid.step;
    const int n_terms = opts.run_doubling_check ? 2 * n_max : n_max;
    const int m_top = n_terms + k_max;

    HalfGridWavefunctions psi;
    psi.init(h, count_build, k_max + 3);

    std::vector<std::vector<double>> acc_a(static_cast<std::size_t>(k_max) + 1,
                                           std::vector<double>(count, 0.0));
    std::vector<std::vector<double>> acc_b;
    if (opts.run_doubling_check)
        acc_b.assign(static_cast<std::size_t>(k_max) + 1, std::vector<double>(count, 0.0));

    std::vector<double> phi_v, phi_d, psi_d;
    for (int m = 1; m <= m_top; ++m) {
        psi.advance_to(m);
        detail::irregular_on_grid(m, h, count_build, phi_v, phi_d);

        // end-of-sweep Wronskian guard against integration drift
        {
            const std::size_t ie = count_build - 2;
            const double x = h * static_cast<double>(ie);
            const auto& pm = psi.row(m);
            const auto& pm1 = psi.row(m - 1);
            const double pd = std::sqrt(2.0 * m) * pm1[ie] - x * pm[ie];
            const double w = pm[ie] * phi_d[ie] - pd * phi_v[ie];
            if (std::abs(w / 2.0 - 1.0) > 1e-6)
                throw NumericalInstability("kernel build: Wronskian drift at m = " +
                                           std::to_string(m));
        }

        const int k_lo = std::max(1, m - n_terms);
        for (int k = k_lo; k <= std::min(k_max, m); ++k) {
            const int n = m - k;
            const double wa = window_weight(n, n_max);
            const double wb = opts.run_doubling_check ? window_weight(n, 2 * n_max) : 0.0;
            if (wa == 0.0 && wb == 0.0) continue;
            const auto& pn = psi.row(n);
            const auto& pn1 = n >= 1 ? psi.row(n - 1) : psi.row(n); // unused when n == 0
            const double sq2n = n >= 1 ? std::sqrt(2.0 * n) : 0.0;
            auto& ta = acc_a[static_cast<std::size_t>(k)];
            auto* tb = (opts.run_doubling_check && wb != 0.0)
                           ? &acc_b[static_cast<std::size_t>(k)]
                           : nullptr;
            for (std::size_t i = 0; i < count; ++i) {
                const double x = h * static_cast<double>(i);
                const double pd = (n >= 1 ? sq2n * pn1[i] : 0.0) - x * pn[i];
                const double f = pd * phi_v[i] + pn[i] * phi_d[i];
                ta[i] += wa * f;
                if (tb) (*tb)[i] += wb * f;
            }
        }
    }

    // moment-check wavefunction sweep bound: states the grid can hold
    const double usable = std::max(0.0, grid.x_cut - 2.0);
    std::vector<KernelTable> out;
    out.reserve(static_cast<std::size_t>(k_max));

    for (int k = 1; k <= k_max; ++k) {
        const auto basis = gauge_basis(k, grid);
        std::vector<double> fa = mirror_with_parity(acc_a[static_cast<std::size_t>(k)], k);
        project_out(fa, basis);

        KernelTable t;
        t.k = k;
        t.n_max_used = n_max;
        t.grid = grid;

        if (opts.run_doubling_check) {
            std::vector<double> fb = mirror_with_parity(acc_b[static_cast<std::size_t>(k)], k);
            project_out(fb, basis);
            // sup over the core |x| <= sqrt(n_max + 1): the region populated by
            // states within the exact-moment window
            const double x_core = std::min(grid.x_cut, std::sqrt(double(n_max) + 1.0));
            const std::size_t lo = static_cast<std::size_t>((grid.x_cut - x_core) / h);
            const std::size_t hi = fa.size() - 1 - lo;
            double d = 0.0;
            for (std::size_t i = lo; i <= hi; ++i) d = std::max(d, std::abs(fa[i] - fb[i]));
            t.doubling_delta = d;
            if (d > opts.doubling_tol)
                throw ConvergenceError("phase kernel k=" + std::to_string(k) +
                                       ": doubling delta " + std::to_string(d) +
                                       " exceeds tolerance " + std::to_string(opts.doubling_tol));
        }

        t.values = std::move(fa);

        // tail plateaus: average over the outer 0.5 of x on each side
        const std::size_t band = std::max<std::size_t>(1, static_cast<std::size_t>(0.5 / h));
        double sl = 0.0, sr = 0.0;
        for (std::size_t i = 0; i < band; ++i) {
            sl += t.values[i];
            sr += t.values[t.values.size() - 1 - i];
        }
        t.tail_left = sl / static_cast<double>(band);
        t.tail_right = sr / static_cast<double>(band);

        if (t.max_abs() > opts.f_bound)
            throw ConvergenceError("phase kernel k=" + std::to_string(k) + ": max |F| = " +
                                   std::to_string(t.max_abs()) + " exceeds bound " +
                                   std::to_string(opts.f_bound));
        out.push_back(std::move(t));
    }

    // moment deviation: integral F_k psi_a psi_{a+k} dx must be 1 for every a
    // within both the window (a <= n_max/2) and the grid's reach.
    {
        const int a_cap_window = n_max / 2;
        std::vector<int> a_cap(static_cast<std::size_t>(k_max) + 1, 0);
        int a_top = 0;
        for (int k = 1; k <= k_max; ++k) {
            const int grid_cap = static_cast<int>((usable * usable - 1.0) / 2.0) - k;
            a_cap[static_cast<std::size_t>(k)] = std::min(a_cap_window, grid_cap);
            if (a_cap[static_cast<std::size_t>(k)] < 8)
                throw ConvergenceError("phase kernel k=" + std::to_string(k) +
                                       ": grid too small for a usable moment window");
            a_top = std::max(a_top, a_cap[static_cast<std::size_t>(k)]);
        }
        std::vector<double> worst(static_cast<std::size_t>(k_max) + 1, 0.0);
        HalfGridWavefunctions chk;
        chk.init(h, count, k_max + 3);
        for (int a = 0; a <= a_top; ++a) {
            chk.advance_to(a + k_max);
            const auto& pa = chk.row(a);
            for (int k = 1; k <= k_max; ++k) {
                if (a > a_cap[static_cast<std::size_t>(k)]) continue;
                const auto& pb = chk.row(a + k);
                const auto& vals = out[static_cast<std::size_t>(k - 1)].values;
                // integrand is even; trapezoid over the positive half, doubled
                double s = 0.5 * vals[hp] * pa[0] * pb[0];
                for (std::size_t i = 1; i < count - 1; ++i)
                    s += vals[hp + i] * pa[i] * pb[i];
                s += 0.5 * vals[2 * hp] * pa[count - 1] * pb[count - 1];
                worst[static_cast<std::size_t>(k)] =
                    std::max(worst[static_cast<std::size_t>(k)], std::abs(2.0 * h * s - 1.0));
            }
        }
        for (int k = 1; k <= k_max; ++k) {
            auto& t = out[static_cast<std::size_t>(k - 1)];
            t.moment_deviation = worst[static_cast<std::size_t>(k)];
            if (t.moment_deviation > opts.moment_tol)
                throw ConvergenceError("phase kernel k=" + std::to_string(k) +
                                       ": moment deviation " + std::to_string(t.moment_deviation) +
                                       " exceeds tolerance " + std::to_string(opts.moment_tol));
        }
    }

    return out;
}

KernelTable phase_moment_kernel(int k, int n_max, const KernelGridSpec& grid,
                                const KernelOptions& opts) {
    if (k < 1) throw DomainError("phase_moment_kernel: k must be >= 1");
    auto tables = build_phase_kernels(k, n_max, grid, opts);
    return std::move(tables.back());
}

double number_kernel(int order, double x) {
    if (order == 1) return x * x - 0.5;
    if (order == 2) return (2.0 / 3.0) * x * x * x * x - x * x;
    throw DomainError("number_kernel: order must be 1 or 2");
}

namespace {

template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw FormatError("kernel cache: truncated file");
    return v;
}

} // namespace

void save_kernel_table(const KernelTable& t, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("kernel cache: cannot open " + path + " for writing");
    os.write(kCacheMagic, 4);
    put(os, kCacheVersion);
    put(os, static_cast<std::int32_t>(t.k));
    put(os, static_cast<std::int32_t>(t.n_max_used));
    put(os, t.grid.x_cut);
    put(os, t.grid.step);
    put(os, static_cast<std::uint64_t>(t.values.size()));
    os.write(reinterpret_cast<const char*>(t.values.data()),
             static_cast<std::streamsize>(t.values.size() * sizeof(double)));
    put(os, t.tail_left);
    put(os, t.tail_right);
    put(os, t.doubling_delta);
    put(os, t.moment_deviation);
    if (!os) throw FormatError("kernel cache: write failed for " + path);
}

KernelTable load_kernel_table(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("kernel cache: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kCacheMagic, 4) != 0)
        throw FormatError("kernel cache: bad magic in " + path);
    if (get<std::uint32_t>(is) != kCacheVersion)
        throw FormatError("kernel cache: unsupported version in " + path);
    KernelTable t;
    t.k = get<std::int32_t>(is);
    t.n_max_used = get<std::int32_t>(is);
    t.grid.x_cut = get<double>(is);
    t.grid.step = get<double>(is);
    const auto n = get<std::uint64_t>(is);
    if (n != t.grid.points())
        throw FormatError("kernel cache: value count does not match grid in " + path);
    t.values.resize(n);
    is.read(reinterpret_cast<char*>(t.values.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw FormatError("kernel cache: truncated values in " + path);
    t.tail_left = get<double>(is);
    t.tail_right = get<double>(is);
    t.doubling_delta = get<double>(is);
    t.moment_deviation = get<double>(is);
    return t;
}

std::string kernel_cache_name(int k, int n_max, const KernelGridSpec& grid) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "pkt1_v%u_k%02d_n%04d_xc%05d_st%04d.bin",
                  kCacheVersion, k, n_max,
                  static_cast<int>(std::lround(grid.x_cut * 1000.0)),
                  static_cast<int>(std::lround(grid.step * 1e6)));
    return buf;
}

} // namespace phasemom
