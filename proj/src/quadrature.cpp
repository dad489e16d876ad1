#include "modeinv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace modeinv {

namespace {

// QUADPACK 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cd value;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel& p, const Panel& q) const { return p.error < q.error; }
};

Panel evaluate_panel(const std::function<cd(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    const cd fc = f(c);
    cd kron = wgk[7] * fc;
    cd gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const cd f1 = f(c - h * xgk[j]);
        const cd f2 = f(c + h * xgk[j]);
        kron += wgk[j] * (f1 + f2);
        if (j % 2 == 1)
            gauss += wg[j / 2] * (f1 + f2);
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

} // namespace

QuadResult integrate_gk(const std::function<cd(double)>& f,
                        const std::vector<double>& breakpoints,
                        const QuadOptions& opt)
{
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;

    cd total{};
    double err = 0.0;
    int n_panels = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        Panel p = evaluate_panel(f, breakpoints[i], breakpoints[i + 1]);
        total += p.value;
        err += p.error;
        queue.push(p);
        ++n_panels;
    }

    auto tolerance = [&]() { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

    while (err > tolerance() && n_panels < opt.max_intervals) {
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            break; // interval at floating-point resolution
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++n_panels;
    }

    // Re-sum the leaves so the returned value does not carry the incremental
    // update roundoff of the refinement loop.
    cd resum{};
    double rerr = 0.0;
    while (!queue.empty()) {
        resum += queue.top().value;
        rerr += queue.top().error;
        queue.pop();
    }

    QuadResult r;
    r.value = resum;
    r.est_error = rerr;
    r.intervals = n_panels;
    r.converged = rerr <= std::max(opt.abs_tol, opt.rel_tol * std::abs(resum));
    return r;
}

QuadResult integrate_gk(const std::function<cd(double)>& f, double a, double b,
                        const QuadOptions& opt)
{
    return integrate_gk(f, std::vector<double>{a, b}, opt);
}

std::vector<double> sine_zero_partition(double b, double T, int max_panels)
{
    std::vector<double> pts;
    pts.push_back(0.0);
    if (b > 0.0) {
        const double period = pi / b;
        const long n_zeros = static_cast<long>(std::floor(T / period));
        const long stride = std::max<long>(1, (n_zeros + max_panels - 1) / max_panels);
        for (long j = stride; j <= n_zeros; j += stride) {
            const double t = static_cast<double>(j) * period;
            if (t > pts.back() && t < T)
                pts.push_back(t);
        }
    }
    pts.push_back(T);
    return pts;
}

} // namespace modeinv
