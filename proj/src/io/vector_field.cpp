#include "pregrasp/io/vector_field.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "pregrasp/io/atomic_file.hpp"
#include "pregrasp/physics/world.hpp"

namespace pregrasp::io {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

VectorFieldSpec default_field_spec(const env::EnvConfig& cfg) {
  VectorFieldSpec spec;
  spec.scene = cfg.defaults;
  spec.fixed_pitch = cfg.defaults.eff_init.pitch;
  spec.box_state.position = {cfg.defaults.box_position_y,
                             0.5 * cfg.defaults.box_geometry.height};
  spec.box_state.pitch = 0.0;
  return spec;
}

std::vector<FieldSample> sample_vector_field(const env::EnvConfig& cfg,
                                             const nn::MlpParams& actor,
                                             const VectorFieldSpec& spec) {
  if (spec.ny < 2 || spec.nz < 2) {
    throw FieldOutsideWorkspace("grid counts must be at least 2");
  }
  const env::Workspace& ws = cfg.workspace;
  if (spec.y_min < ws.y_min || spec.y_max > ws.y_max || spec.z_min < ws.z_min ||
      spec.z_max > ws.z_max || spec.fixed_pitch < ws.pitch_min ||
      spec.fixed_pitch > ws.pitch_max) {
    throw FieldOutsideWorkspace("vector-field grid leaves the command workspace");
  }

  const phys::WorldConfig wc = env::make_world_config(cfg, spec.scene);
  phys::EffectorState eff;
  eff.radius = wc.effector_radius;
  eff.pitch = spec.fixed_pitch;

  std::vector<FieldSample> out;
  out.reserve(static_cast<std::size_t>(spec.ny) * static_cast<std::size_t>(spec.nz));
  for (int iy = 0; iy < spec.ny; ++iy) {
    const double y = spec.y_min + (spec.y_max - spec.y_min) * iy / (spec.ny - 1);
    for (int iz = 0; iz < spec.nz; ++iz) {
      const double z = spec.z_min + (spec.z_max - spec.z_min) * iz / (spec.nz - 1);
      eff.center = {y, z};
      env::Observation obs;
      obs.d = phys::signed_clearance(wc.box, eff, spec.box_state);
      obs.eff_y = y;
      obs.eff_z = z;
      obs.eff_pitch = spec.fixed_pitch;
      obs.target_y = spec.box_state.position.y;
      obs.target_z = spec.box_state.position.z;
      obs.target_pitch = spec.box_state.pitch;
      const env::Action a = sac::policy_mean(actor, obs);
      out.push_back({y, z, a.dy, a.dz});
    }
  }
  return out;
}

double toward_object_fraction(const std::vector<FieldSample>& samples,
                              const phys::BoxGeometry& geom,
                              const phys::RigidBodyState2D& box_state) {
  const auto [a, b] = phys::front_face(geom, box_state);
  const double face_y = std::min(a.y, b.y);
  const double z_lo = std::min(a.z, b.z);
  const double z_hi = std::max(a.z, b.z);
  int total = 0, toward = 0;
  for (const FieldSample& s : samples) {
    if (s.y < face_y && s.z >= z_lo && s.z <= z_hi) {
      total += 1;
      toward += s.dy > 0.0 ? 1 : 0;
    }
  }
  return total > 0 ? static_cast<double>(toward) / total : 0.0;
}

void export_vector_field(const env::EnvConfig& cfg, const nn::MlpParams& actor,
                         const VectorFieldSpec& spec, const std::string& csv_path,
                         const std::optional<std::string>& svg_path,
                         const std::string& config_hash, std::uint64_t seed) {
  const auto samples = sample_vector_field(cfg, actor, spec);

  std::ostringstream csv;
  csv << "# config_hash=" << config_hash << " seed=" << seed << "\n";
  csv << "y,z,dy,dz\n";
  for (const FieldSample& s : samples) {
    csv << fmt(s.y) << "," << fmt(s.z) << "," << fmt(s.dy) << "," << fmt(s.dz) << "\n";
  }
  atomic_write(csv_path, csv.str());

  if (!svg_path) return;

  // Minimal static drawing: scene rectangles plus one line per arrow.
  const double margin = 0.03;
  const double x0 = spec.y_min - margin, x1 = spec.y_max + margin;
  const double y0 = -0.01, y1 = spec.z_max + margin;
  const double scale = 900.0 / (x1 - x0);
  const double height = (y1 - y0) * scale;
  auto px = [&](double y) { return (y - x0) * scale; };
  auto pz = [&](double z) { return height - (z - y0) * scale; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\""
      << static_cast<int>(height) << "\" viewBox=\"0 0 900 " << static_cast<int>(height)
      << "\">\n";
  svg << "<!-- config_hash=" << config_hash << " seed=" << seed << " -->\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // table
  svg << "<line x1=\"0\" y1=\"" << pz(0.0) << "\" x2=\"900\" y2=\"" << pz(0.0)
      << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  // box
  {
    const phys::WorldConfig wc = env::make_world_config(cfg, spec.scene);
    const auto corners = phys::box_corners(wc.box, spec.box_state);
    svg << "<polygon points=\"";
    for (const Vec2& c : corners) svg << px(c.y) << "," << pz(c.z) << " ";
    svg << "\" fill=\"#6699ee\" stroke=\"#224488\"/>\n";
    // support
    const Vec2 base = wc.support.base();
    const Vec2 top = wc.support.top();
    svg << "<line x1=\"" << px(base.y) << "\" y1=\"" << pz(base.z) << "\" x2=\"" << px(top.y)
        << "\" y2=\"" << pz(std::min(top.z, y1)) << "\" stroke=\"#33aa55\" stroke-width=\"6\"/>\n";
  }
  // arrows: base dot plus a shaft, max action drawn as a 1 cm segment
  const double arrow_gain = 0.01 / env::kActionBounds[0];
  for (const FieldSample& s : samples) {
    svg << "<line x1=\"" << px(s.y) << "\" y1=\"" << pz(s.z) << "\" x2=\""
        << px(s.y + s.dy * arrow_gain) << "\" y2=\"" << pz(s.z + s.dz * arrow_gain)
        << "\" stroke=\"#cc3333\" stroke-width=\"1\"/>\n";
    svg << "<circle cx=\"" << px(s.y) << "\" cy=\"" << pz(s.z)
        << "\" r=\"1.5\" fill=\"#444444\"/>\n";
  }
  svg << "</svg>\n";
  atomic_write(*svg_path, svg.str());
}

}  // namespace pregrasp::io
