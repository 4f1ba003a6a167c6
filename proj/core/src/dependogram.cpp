#include "gei/dependogram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gei/asymptotics.hpp"
#include "gei/csv.hpp"
#include "gei/errors.hpp"

namespace gei {

namespace {

std::string subset_text(const Subset& a, const char* sep) {
    std::ostringstream out;
    for (std::size_t i = 0; i < a.size(); ++i) out << (i ? sep : "") << a[i] + 1;
    return out.str();
}

std::string lag_text(const LagVector& l, const char* sep) {
    std::ostringstream out;
    for (std::size_t i = 0; i < l.size(); ++i) out << (i ? sep : "") << l[i];
    return out.str();
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

Dependogram make_dependogram(const StatisticReport& report, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("dependogram: alpha must lie in (0, 1)");
    Dependogram g;
    g.alpha = alpha;
    g.critical_pair = XiDistribution::standard(2).upper_quantile(alpha);
    for (const auto& t : report.per_term) {
        if (t.kind != "S") continue;
        DependogramBar bar;
        bar.subset = t.subset;
        bar.lag = t.lag;
        bar.value = t.value;
        bar.p_value = t.p_value;
        if (t.subset.size() == 3 && g.critical_triple == 0.0)
            g.critical_triple = XiDistribution::standard(3).upper_quantile(alpha);
        bar.critical = t.subset.size() == 2 ? g.critical_pair : g.critical_triple;
        bar.significant = t.p_value < alpha;
        bar.label = "{" + subset_text(t.subset, ",") + "} (" + lag_text(t.lag, ",") + ")";
        g.bars.push_back(std::move(bar));
    }
    if (g.bars.empty()) throw InvalidArgument("dependogram: report has no Cramer-von Mises terms");
    return g;
}

std::string dependogram_csv(const Dependogram& g) {
    std::ostringstream out;
    out << "subset,lag,S,critical,p_value,significant\n";
    for (const auto& b : g.bars) {
        out << subset_text(b.subset, " ") << "," << lag_text(b.lag, " ") << "," << csv_number(b.value) << ","
            << csv_number(b.critical) << "," << csv_number(b.p_value) << "," << (b.significant ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string dependogram_svg(const Dependogram& g) {
    const double bar_w = 10.0, gap = 4.0;
    const double left = 60.0, right = 20.0, top = 30.0, plot_h = 260.0, bottom = 110.0;
    const double plot_w = g.bars.size() * (bar_w + gap) + gap;
    const double width = left + plot_w + right, height = top + plot_h + bottom;

    double ymax = std::max(g.critical_pair, g.critical_triple);
    for (const auto& b : g.bars) ymax = std::max(ymax, b.value);
    ymax = ymax > 0.0 ? ymax * 1.1 : 1.0;
    auto y = [&](double v) { return top + plot_h * (1.0 - std::max(v, 0.0) / ymax); };

    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    out << "<title>Dependogram of Cramer-von Mises statistics (alpha = " << g.alpha << ")</title>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = ymax * k / 4.0;
        out << "<text x=\"" << left - 4 << "\" y=\"" << y(v) + 3 << "\" text-anchor=\"end\">" << v << "</text>\n";
    }

    // Critical lines span the bars of their cardinality.
    for (std::size_t card : {2u, 3u}) {
        double x0 = -1, x1 = -1;
        for (std::size_t i = 0; i < g.bars.size(); ++i) {
            if (g.bars[i].subset.size() != card) continue;
            const double x = left + gap + i * (bar_w + gap);
            if (x0 < 0) x0 = x - gap / 2;
            x1 = x + bar_w + gap / 2;
        }
        if (x0 < 0) continue;
        const double c = card == 2 ? g.critical_pair : g.critical_triple;
        out << "<line class=\"critical\" data-cardinality=\"" << card << "\" x1=\"" << x0 << "\" y1=\"" << y(c)
            << "\" x2=\"" << x1 << "\" y2=\"" << y(c) << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (std::size_t i = 0; i < g.bars.size(); ++i) {
        const auto& b = g.bars[i];
        const double x = left + gap + i * (bar_w + gap);
        out << "<rect class=\"bar\" data-significant=\"" << (b.significant ? "true" : "false") << "\" x=\"" << x
            << "\" y=\"" << y(b.value) << "\" width=\"" << bar_w << "\" height=\"" << top + plot_h - y(b.value)
            << "\" fill=\"" << (b.significant ? "#c0392b" : "#4a6fa5") << "\"><title>" << escape_xml(b.label)
            << ": S=" << b.value << ", p=" << b.p_value << "</title></rect>\n";
        const double tx = x + bar_w / 2 + 3, ty = top + plot_h + 6;
        out << "<text x=\"" << tx << "\" y=\"" << ty << "\" transform=\"rotate(90 " << tx << " " << ty
            << ")\" font-size=\"8\">" << escape_xml(b.label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace gei
