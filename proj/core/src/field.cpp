#include "oscilab/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oscilab/io.hpp"

namespace oscilab {

SampledField::SampledField(YDomain domain, double spacing,
                           const std::function<std::complex<double>(std::span<const double>)>& f,
                           double sup_bound)
    : domain_(std::move(domain)), sup_bound_(sup_bound) {
    if (spacing <= 0.0) throw std::invalid_argument("SampledField: spacing > 0 required");
    const std::size_t d = domain_.dim();
    if (d == 0) throw std::invalid_argument("SampledField: empty domain");
    counts_.resize(d);
    spacings_.resize(d);
    std::size_t total = 1;
    cell_volume_ = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double extent = domain_.hi[i] - domain_.lo[i];
        if (extent <= 0.0) throw std::invalid_argument("SampledField: empty domain box");
        counts_[i] = std::max(1, static_cast<int>(std::ceil(extent / spacing - 1e-12)));
        spacings_[i] = extent / counts_[i];
        max_spacing_ = std::max(max_spacing_, spacings_[i]);
        cell_volume_ *= spacings_[i];
        total *= static_cast<std::size_t>(counts_[i]);
    }
    values_.resize(total);
    std::vector<int> idx(d, 0);
    Vec y(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t i = 0; i < d; ++i) y[i] = domain_.lo[i] + (idx[i] + 0.5) * spacings_[i];
        values_[flat] = f(y);
        if (std::abs(values_[flat]) > sup_bound_ * (1.0 + 1e-12))
            throw std::invalid_argument("SampledField: value exceeds sup bound");
        for (std::size_t i = d; i-- > 0;) {
            if (++idx[i] < counts_[i]) break;
            idx[i] = 0;
        }
    }
}

SampledField SampledField::constant(YDomain domain, double spacing, std::complex<double> value) {
    const double bound = std::max(1.0, std::abs(value));
    return SampledField(std::move(domain), spacing,
                        [value](std::span<const double>) { return value; }, bound);
}

SampledField SampledField::from_table(YDomain domain, std::vector<int> counts,
                                      std::vector<std::complex<double>> values,
                                      double sup_bound) {
    const std::size_t d = domain.dim();
    if (counts.size() != d) throw std::invalid_argument("from_table: count dimension mismatch");
    std::size_t total = 1;
    for (const int c : counts) {
        if (c < 1) throw std::invalid_argument("from_table: counts must be positive");
        total *= static_cast<std::size_t>(c);
    }
    if (values.size() != total) throw std::invalid_argument("from_table: value count mismatch");
    SampledField f(domain, std::numeric_limits<double>::max(),
                   [](std::span<const double>) { return std::complex<double>(0.0, 0.0); },
                   sup_bound);
    f.counts_ = counts;
    f.spacings_.resize(d);
    f.cell_volume_ = 1.0;
    f.max_spacing_ = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        f.spacings_[i] = (domain.hi[i] - domain.lo[i]) / counts[i];
        f.cell_volume_ *= f.spacings_[i];
        f.max_spacing_ = std::max(f.max_spacing_, f.spacings_[i]);
    }
    f.values_ = std::move(values);
    for (const auto& v : f.values_)
        if (std::abs(v) > sup_bound * (1.0 + 1e-12))
            throw std::invalid_argument("from_table: value exceeds sup bound");
    return f;
}

std::string field_to_csv(const SampledField& f) {
    std::string out;
    const std::size_t d = f.dim();
    for (std::size_t i = 0; i < d; ++i) out += "y" + std::to_string(i + 1) + ",";
    out += "re,im\n";
    for (std::size_t j = 0; j < f.size(); ++j) {
        const Vec y = f.node(j);
        for (std::size_t i = 0; i < d; ++i) out += CsvWriter::format_double(y[i]) + ",";
        out += CsvWriter::format_double(f.values()[j].real()) + "," +
               CsvWriter::format_double(f.values()[j].imag()) + "\n";
    }
    return out;
}

SampledField field_from_csv(const std::string& csv, double sup_bound) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("field_from_csv: empty input");
    const std::size_t d = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) - 1;
    if (d == 0 || d > 8) throw std::invalid_argument("field_from_csv: bad column count");
    std::vector<Vec> nodes;
    std::vector<std::complex<double>> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        Vec y(d);
        for (std::size_t i = 0; i < d; ++i) {
            std::getline(row, tok, ',');
            y[i] = std::stod(tok);
        }
        std::getline(row, tok, ',');
        const double re = std::stod(tok);
        std::getline(row, tok, ',');
        const double im = std::stod(tok);
        nodes.push_back(std::move(y));
        values.push_back({re, im});
    }
    if (nodes.empty()) throw std::invalid_argument("field_from_csv: no rows");
    // Infer the cell-centered lattice: per-axis sorted unique coordinates at
    // uniform spacing, rows in canonical row-major order.
    YDomain domain;
    domain.lo.resize(d);
    domain.hi.resize(d);
    std::vector<int> counts(d);
    for (std::size_t i = 0; i < d; ++i) {
        Vec coords;
        for (const Vec& y : nodes) coords.push_back(y[i]);
        std::sort(coords.begin(), coords.end());
        coords.erase(std::unique(coords.begin(), coords.end(),
                                 [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
                     coords.end());
        counts[i] = static_cast<int>(coords.size());
        const double spacing =
            counts[i] > 1 ? (coords.back() - coords.front()) / (counts[i] - 1) : 1.0;
        for (std::size_t k = 1; k < coords.size(); ++k)
            if (std::fabs(coords[k] - coords[k - 1] - spacing) > 1e-9 * std::fabs(spacing))
                throw std::invalid_argument("field_from_csv: non-uniform lattice");
        domain.lo[i] = coords.front() - 0.5 * spacing;
        domain.hi[i] = coords.back() + 0.5 * spacing;
    }
    std::size_t total = 1;
    for (const int c : counts) total *= static_cast<std::size_t>(c);
    if (total != nodes.size())
        throw std::invalid_argument("field_from_csv: rows do not fill the lattice");
    // Slot each row by its lattice index so the input row order is free.
    std::vector<std::complex<double>> ordered(total);
    std::vector<bool> seen(total, false);
    for (std::size_t r = 0; r < nodes.size(); ++r) {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const double spacing = (domain.hi[i] - domain.lo[i]) / counts[i];
            const long idx = std::lround((nodes[r][i] - domain.lo[i]) / spacing - 0.5);
            if (idx < 0 || idx >= counts[i])
                throw std::invalid_argument("field_from_csv: node off the lattice");
            flat = flat * static_cast<std::size_t>(counts[i]) + static_cast<std::size_t>(idx);
        }
        if (seen[flat]) throw std::invalid_argument("field_from_csv: duplicate node");
        seen[flat] = true;
        ordered[flat] = values[r];
    }
    if (sup_bound <= 0.0) {  // infer the bound from the data
        for (const auto& v : ordered) sup_bound = std::max(sup_bound, std::abs(v));
        sup_bound = std::max(sup_bound, 1e-300);
    }
    return SampledField::from_table(std::move(domain), std::move(counts), std::move(ordered),
                                    sup_bound);
}

Vec SampledField::node(std::size_t flat) const {
    const std::size_t d = domain_.dim();
    Vec y(d);
    for (std::size_t i = d; i-- > 0;) {
        const std::size_t c = static_cast<std::size_t>(counts_[i]);
        y[i] = domain_.lo[i] + (static_cast<double>(flat % c) + 0.5) * spacings_[i];
        flat /= c;
    }
    return y;
}

SampledField SampledField::operator+(const SampledField& other) const {
    if (values_.size() != other.values_.size() || counts_ != other.counts_)
        throw std::invalid_argument("SampledField: mismatched lattices");
    SampledField out = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] += other.values_[i];
    out.sup_bound_ = sup_bound_ + other.sup_bound_;
    return out;
}

EvaluationGrid EvaluationGrid::ball(Vec center, double radius, double spacing) {
    if (spacing <= 0.0 || radius <= 0.0)
        throw std::invalid_argument("EvaluationGrid::ball: positive radius and spacing required");
    const std::size_t d = center.size();
    Vec lo(d), hi(d), spacings(d, spacing);
    for (std::size_t i = 0; i < d; ++i) {
        lo[i] = center[i] - radius;
        hi[i] = center[i] + radius;
    }
    const double r2 = radius * radius;
    return box(std::move(lo), std::move(hi), std::move(spacings),
               [center = std::move(center), r2](std::span<const double> x) {
                   double s = 0.0;
                   for (std::size_t i = 0; i < center.size(); ++i) {
                       const double dxi = x[i] - center[i];
                       s += dxi * dxi;
                   }
                   return s <= r2;
               });
}

EvaluationGrid EvaluationGrid::box(Vec lo, Vec hi, Vec spacings,
                                   const std::function<bool(std::span<const double>)>& keep) {
    const std::size_t d = lo.size();
    if (d == 0 || hi.size() != d || spacings.size() != d)
        throw std::invalid_argument("EvaluationGrid::box: bad dimensions");
    EvaluationGrid g;
    std::vector<int> counts(d);
    Vec actual(d);
    g.cell_volume_ = 1.0;
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        const double extent = hi[i] - lo[i];
        if (extent <= 0.0 || spacings[i] <= 0.0)
            throw std::invalid_argument("EvaluationGrid::box: bad box or spacing");
        counts[i] = std::max(1, static_cast<int>(std::ceil(extent / spacings[i] - 1e-12)));
        actual[i] = extent / counts[i];
        g.max_spacing_ = std::max(g.max_spacing_, actual[i]);
        g.cell_volume_ *= actual[i];
        total *= static_cast<std::size_t>(counts[i]);
    }
    std::vector<int> idx(d, 0);
    Vec x(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t i = 0; i < d; ++i) x[i] = lo[i] + (idx[i] + 0.5) * actual[i];
        if (!keep || keep(x)) g.nodes_.push_back(x);
        for (std::size_t i = d; i-- > 0;) {
            if (++idx[i] < counts[i]) break;
            idx[i] = 0;
        }
    }
    return g;
}

double lattice_lp_norm(const std::vector<std::complex<double>>& values,
                       const EvaluationGrid& grid, double p) {
    if (grid.size() == 0) throw std::domain_error("lattice_lp_norm: empty grid");
    if (values.size() != grid.size())
        throw std::invalid_argument("lattice_lp_norm: value/grid size mismatch");
    if (p < 1.0) throw std::domain_error("lattice_lp_norm: p >= 1 required");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (const auto& v : values) s += std::pow(std::abs(v), p);
    return std::pow(s * grid.cell_volume(), 1.0 / p);
}

double lattice_lp_norm_averaged(const std::vector<std::complex<double>>& values,
                                const EvaluationGrid& grid, double p) {
    if (std::isinf(p)) return lattice_lp_norm(values, grid, p);
    const double raw = lattice_lp_norm(values, grid, p);
    return raw * std::pow(grid.total_volume(), -1.0 / p);
}

}  // namespace oscilab
