#include "dswell/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dswell/tensor_geometry.hpp"

namespace dswell {

KernelField::KernelField(const TransformChain& chain, const KernelSpec& spec, double s_begin, double s_end,
                         JacobianMode mode)
    : chain_(chain), map_(chain.a, chain.b), spec_(spec), s0_(s_begin), s1_(s_end), mode_(mode)
{
    if (!(spec.outer > spec.inner) || spec.inner < 0.0) throw std::invalid_argument("kernel needs outer > inner >= 0");
    if (spec.inner < map_.focal() * (1.0 - 1e-12))
        throw std::invalid_argument("kernel inner radius must not be smaller than the focal distance");
    if (s_end < s_begin) throw std::invalid_argument("kernel segment has negative length");
}

double KernelField::operator()(const Vec3& x) const
{
    const Vec3 v = chain_.forward(x);
    const double s = v[2] / chain_.axial_scale;
    if (s < s0_ || s > s1_) return 0.0;
    const Complex z{v[0], v[1]};
    const double f = map_.focal();
    if (f > 0.0 && std::abs(z.imag()) <= 1e-14 * f && std::abs(z.real()) <= f) return 0.0;
    const Complex w = map_.to_w_unchecked(z);
    const double r = std::abs(w);
    if (r < spec_.inner || r > spec_.outer || !(r > f)) return 0.0;
    const double phi_a = spec_.density();
    return phi_a * (mode_ == JacobianMode::exact ? map_.phi_j(w) : 4.0);
}

double KernelField::exact_support_volume() const
{
    const double f4 = std::pow(map_.focal(), 4);
    const auto area = [f4](double r) { return r > 0.0 ? r * r - f4 / (r * r) : 0.0; };
    return 0.25 * std::numbers::pi * (area(spec_.outer) - area(spec_.inner)) * transformed_length();
}

double KernelField::exact_integral() const
{
    if (mode_ == JacobianMode::exact) return transformed_length();
    return 4.0 * spec_.density() * exact_support_volume();
}

double KernelField::x_stretch_factor() const
{
    const SymmetricEigen e = symmetric_eigen(chain_.stretch_inverse);
    const double sigma = e.values[2];
    const double r = spec_.inner > 0.0 ? spec_.inner : spec_.outer;
    const double dz_dw = spec_.inner > 0.0 ? map_.max_stretch_at_radius(r) : (map_.focal() == 0.0 ? 0.5 : 1.0);
    return sigma * dz_dw;
}

double IntegrationPointSet::total_volume() const
{
    double s = 0.0;
    for (double v : volumes) s += v;
    return s;
}

double IntegrationPointSet::total_weight() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < volumes.size(); ++i) s += volumes[i] * kernel[i];
    return s;
}

namespace {

// One slice of the lattice: in-plane x-offsets and the w-plane data of every
// point. Identical for all slices of a piece.
struct SliceLayout {
    std::vector<Vec3> offsets;     // S^-1 Rhat (Re z, Im z, 0)
    std::vector<double> area_w;    // w-plane area element
    std::vector<double> phi_j;     // Phi_J at the point
    double d_axial = 0.0;          // slice thickness in v3
    std::size_t num_slices = 0;
    double axial_start = 0.0;      // v3 of the first slice centre
};

SliceLayout make_layout(const KernelField& field, double spacing)
{
    if (!(spacing > 0.0)) throw std::invalid_argument("integration spacing must be positive");
    const KernelSpec& k = field.spec();
    const JoukowskyMap& map = field.map();
    const TransformChain& c = field.chain();
    const double dw = spacing / field.x_stretch_factor();
    const double thickness = k.outer - k.inner;
    if (dw > thickness)
        throw std::invalid_argument("integration spacing does not resolve the kernel annulus thickness");

    SliceLayout lay;
    const auto n_r = static_cast<std::size_t>(std::ceil(thickness / dw));
    const double band = thickness / static_cast<double>(n_r);
    for (std::size_t i = 0; i < n_r; ++i) {
        const double r0 = k.inner + band * static_cast<double>(i);
        const double r1 = (i + 1 == n_r) ? k.outer : r0 + band;
        const double r_mid = std::sqrt(0.5 * (r0 * r0 + r1 * r1));
        const auto n_t = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * r_mid / dw)));
        const double da = std::numbers::pi * (r1 * r1 - r0 * r0) / static_cast<double>(n_t);
        for (std::size_t j = 0; j < n_t; ++j) {
            const double theta = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n_t);
            const Complex w = std::polar(r_mid, theta);
            const Complex z = map.from_w(w);
            lay.offsets.push_back(c.inverse_matrix * Vec3{z.real(), z.imag(), 0.0});
            lay.area_w.push_back(da);
            lay.phi_j.push_back(map.phi_j(w));
        }
    }
    const double l_hat = field.transformed_length();
    const double ds_target = spacing * c.axial_scale;
    lay.num_slices = l_hat > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(l_hat / ds_target))) : 0;
    lay.d_axial = lay.num_slices ? l_hat / static_cast<double>(lay.num_slices) : 0.0;
    lay.axial_start = c.axial_scale * field.s_begin() + 0.5 * lay.d_axial;
    return lay;
}

// Kernel weight V_i Phi_Lambda of point j (independent of the slice).
double point_weight(const KernelField& field, const SliceLayout& lay, std::size_t j)
{
    const double phi_a = field.spec().density();
    const double base = phi_a * lay.area_w[j] * lay.d_axial;
    return field.mode() == JacobianMode::exact ? base : base * 4.0 / lay.phi_j[j];
}

Vec3 slice_center(const KernelField& field, const SliceLayout& lay, std::size_t k)
{
    const TransformChain& c = field.chain();
    const double v3 = lay.axial_start + lay.d_axial * static_cast<double>(k);
    return c.origin + (v3 / c.axial_scale) * c.well_direction;
}

constexpr std::size_t outside = static_cast<std::size_t>(-1);

// Dense scratch accumulator with a touched list.
class Accumulator {
public:
    explicit Accumulator(std::size_t n) : values_(n, 0.0) {}
    void add(std::size_t cell, double w)
    {
        if (values_[cell] == 0.0) touched_.push_back(cell);
        values_[cell] += w;
    }
    std::vector<std::pair<std::size_t, double>> take(double scale)
    {
        std::sort(touched_.begin(), touched_.end());
        touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
        std::vector<std::pair<std::size_t, double>> out;
        out.reserve(touched_.size());
        for (std::size_t c : touched_) {
            if (values_[c] != 0.0) out.emplace_back(c, values_[c] * scale);
            values_[c] = 0.0;
        }
        touched_.clear();
        return out;
    }

private:
    std::vector<double> values_;
    std::vector<std::size_t> touched_;
};

SegmentWeights finish(Accumulator& acc, const KernelField& field, double sampled, std::size_t npts)
{
    SegmentWeights out;
    out.exact_total = field.exact_integral();
    out.sampled_total = sampled;
    out.num_points = npts;
    const double scale = sampled > 0.0 ? out.exact_total / sampled : 0.0;
    out.cells = acc.take(scale);
    for (const auto& [c, w] : out.cells) out.in_mesh_total += w;
    return out;
}

}  // namespace

IntegrationPointSet generate_integration_points(const KernelField& field, double target_spacing)
{
    const SliceLayout lay = make_layout(field, target_spacing);
    IntegrationPointSet set;
    const std::size_t per = lay.offsets.size();
    set.points.reserve(per * lay.num_slices);
    set.volumes.reserve(per * lay.num_slices);
    set.kernel.reserve(per * lay.num_slices);
    const double phi_a = field.spec().density();
    for (std::size_t k = 0; k < lay.num_slices; ++k) {
        const Vec3 base = slice_center(field, lay, k);
        for (std::size_t j = 0; j < per; ++j) {
            set.points.push_back(base + lay.offsets[j]);
            set.volumes.push_back(lay.area_w[j] * lay.d_axial / lay.phi_j[j]);
            set.kernel.push_back(phi_a * (field.mode() == JacobianMode::exact ? lay.phi_j[j] : 4.0));
        }
    }
    return set;
}

double cell_kernel_weight(const IntegrationPointSet& points, const Box& cell)
{
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (cell.contains(points.points[i])) s += points.volumes[i] * points.kernel[i];
    return s;
}

double default_sampling_spacing(const KernelField& field, const StructuredMesh& mesh)
{
    const double thickness = field.spec().outer - field.spec().inner;
    return std::min(0.25 * mesh.h_min(), thickness / 20.0 * field.x_stretch_factor());
}

SegmentWeights compute_cell_weights_serial(const KernelField& field, const StructuredMesh& mesh, double spacing)
{
    const SliceLayout lay = make_layout(field, spacing);
    const std::size_t per = lay.offsets.size();
    std::vector<double> weight(per);
    for (std::size_t j = 0; j < per; ++j) weight[j] = point_weight(field, lay, j);

    Accumulator acc(mesh.num_cells());
    double sampled = 0.0;
    for (std::size_t k = 0; k < lay.num_slices; ++k) {
        const Vec3 base = slice_center(field, lay, k);
        for (std::size_t j = 0; j < per; ++j) {
            sampled += weight[j];
            const Vec3 x = base + lay.offsets[j];
            if (!mesh.bounds().contains(x)) continue;
            if (const auto cell = mesh.locate(x)) acc.add(*cell, weight[j]);
        }
    }
    return finish(acc, field, sampled, per * lay.num_slices);
}

SegmentWeights compute_cell_weights(const KernelField& field, const StructuredMesh& mesh, double spacing)
{
    const SliceLayout lay = make_layout(field, spacing);
    const std::size_t per = lay.offsets.size();
    std::vector<double> weight(per);
    for (std::size_t j = 0; j < per; ++j) weight[j] = point_weight(field, lay, j);

    // Cell ids are found in parallel one batch of slices at a time, then
    // summed serially in lattice order.
    const std::size_t batch = std::max<std::size_t>(1, (std::size_t{1} << 20) / std::max<std::size_t>(per, 1));
    std::vector<std::size_t> ids(batch * per);
    Accumulator acc(mesh.num_cells());
    double sampled = 0.0;
    for (std::size_t k0 = 0; k0 < lay.num_slices; k0 += batch) {
        const std::size_t k1 = std::min(lay.num_slices, k0 + batch);
        const auto count = static_cast<std::ptrdiff_t>((k1 - k0) * per);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const Vec3 x = slice_center(field, lay, k0 + ui / per) + lay.offsets[ui % per];
            std::size_t id = outside;
            if (mesh.bounds().contains(x))
                if (const auto cell = mesh.locate(x)) id = *cell;
            ids[ui] = id;
        }
        for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
            const std::size_t j = i % per;
            sampled += weight[j];
            if (ids[i] != outside) acc.add(ids[i], weight[j]);
        }
    }
    return finish(acc, field, sampled, per * lay.num_slices);
}

double integrate_kernel_over_segment(const KernelField& field, double spacing)
{
    // Re-evaluate the kernel at the mapped points instead of reusing the
    // lattice values, so the round trip through the forward map is exercised.
    const IntegrationPointSet set = generate_integration_points(field, spacing);
    double s = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) s += set.volumes[i] * field(set.points[i]);
    return s;
}

}  // namespace dswell
