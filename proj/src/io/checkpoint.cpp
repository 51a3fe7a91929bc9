#include "pregrasp/io/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pregrasp/io/atomic_file.hpp"

namespace pregrasp::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

constexpr const char* kMagic = "PREGRASP-CKPT";
constexpr int kVersion = 1;

void append_matrix(std::string& out, const nn::Matrix& m) {
  const std::size_t bytes = static_cast<std::size_t>(m.size()) * sizeof(double);
  const std::size_t at = out.size();
  out.resize(at + bytes);
  std::memcpy(out.data() + at, m.data(), bytes);
}

void append_params(std::string& out, const nn::MlpParams& p) {
  for (const nn::Matrix* t : p.tensors()) append_matrix(out, *t);
}

void append_adam(std::string& out, const nn::AdamState& s) {
  for (const nn::Matrix& m : s.m) append_matrix(out, m);
  for (const nn::Matrix& v : s.v) append_matrix(out, v);
}

void read_matrix(std::istream& in, nn::Matrix& m) {
  const std::streamsize bytes = static_cast<std::streamsize>(m.size()) *
                                static_cast<std::streamsize>(sizeof(double));
  in.read(reinterpret_cast<char*>(m.data()), bytes);
  if (in.gcount() != bytes) throw CheckpointCorrupt("checkpoint truncated in parameter block");
}

void read_params(std::istream& in, nn::MlpParams& p) {
  for (nn::Matrix* t : p.tensors()) read_matrix(in, *t);
}

void read_adam(std::istream& in, nn::AdamState& s) {
  for (nn::Matrix& m : s.m) read_matrix(in, m);
  for (nn::Matrix& v : s.v) read_matrix(in, v);
}

std::string layer_line(const char* name, const nn::MlpParams& p) {
  std::ostringstream out;
  out << "layer " << name << " " << p.layout.input << " " << p.layout.hidden << " "
      << p.layout.hidden << " " << p.layout.output << "\n";
  return out.str();
}

nn::MlpLayout parse_layer_line(std::istringstream& rest, const std::string& line) {
  int in = 0, h1 = 0, h2 = 0, out_w = 0;
  if (!(rest >> in >> h1 >> h2 >> out_w) || h1 != h2) {
    throw CheckpointCorrupt("bad layer line: " + line);
  }
  return nn::MlpLayout{in, h1, out_w};
}

nn::MlpParams zeros_for(const nn::MlpLayout& l) {
  nn::MlpParams p;
  p.layout = l;
  p.w1 = nn::Matrix::Zero(l.hidden, l.input);
  p.b1 = nn::Matrix::Zero(l.hidden, 1);
  p.w2 = nn::Matrix::Zero(l.hidden, l.hidden);
  p.b2 = nn::Matrix::Zero(l.hidden, 1);
  p.w3 = nn::Matrix::Zero(l.output, l.hidden);
  p.b3 = nn::Matrix::Zero(l.output, 1);
  return p;
}

}  // namespace

void save_checkpoint(const std::string& path, const sac::Networks& nets,
                     const CheckpointMeta& meta) {
  std::ostringstream header;
  header << kMagic << " " << kVersion << "\n";
  header << "seed " << meta.seed << "\n";
  header << "config_hash " << meta.config_hash << "\n";
  header << layer_line("actor", nets.actor);
  header << layer_line("critic1", nets.critic1);
  header << layer_line("critic2", nets.critic2);
  header << layer_line("target1", nets.target1);
  header << layer_line("target2", nets.target2);
  header << "scalar log_alpha\n";
  header << "adam actor " << nets.opt_actor.step << "\n";
  header << "adam critic1 " << nets.opt_critic1.step << "\n";
  header << "adam critic2 " << nets.opt_critic2.step << "\n";
  header << "adam alpha " << nets.opt_alpha.step << "\n";
  header << "end\n";

  std::string blob = header.str();
  append_params(blob, nets.actor);
  append_params(blob, nets.critic1);
  append_params(blob, nets.critic2);
  append_params(blob, nets.target1);
  append_params(blob, nets.target2);
  const std::size_t at = blob.size();
  blob.resize(at + sizeof(double));
  std::memcpy(blob.data() + at, &nets.log_alpha, sizeof(double));
  append_adam(blob, nets.opt_actor);
  append_adam(blob, nets.opt_critic1);
  append_adam(blob, nets.opt_critic2);
  append_adam(blob, nets.opt_alpha);

  atomic_write(path, blob);
}

sac::Networks load_checkpoint(const std::string& path, CheckpointMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointCorrupt("cannot open checkpoint: " + path);

  std::string line;
  if (!std::getline(in, line)) throw CheckpointCorrupt("empty checkpoint file");
  {
    std::istringstream first(line);
    std::string magic;
    int version = 0;
    first >> magic >> version;
    if (magic != kMagic) throw CheckpointVersionMismatch("bad magic: " + line);
    if (version != kVersion) {
      throw CheckpointVersionMismatch("unsupported checkpoint version " +
                                      std::to_string(version));
    }
  }

  sac::Networks nets;
  CheckpointMeta local;
  std::vector<std::pair<std::string, nn::MlpLayout>> layers;
  std::vector<std::pair<std::string, std::int64_t>> adam_steps;
  while (std::getline(in, line)) {
    if (line == "end") break;
    std::istringstream rest(line);
    std::string tag;
    rest >> tag;
    if (tag == "seed") {
      rest >> local.seed;
    } else if (tag == "config_hash") {
      rest >> local.config_hash;
    } else if (tag == "layer") {
      std::string name;
      rest >> name;
      layers.emplace_back(name, parse_layer_line(rest, line));
    } else if (tag == "scalar") {
      // log_alpha, fixed
    } else if (tag == "adam") {
      std::string name;
      std::int64_t step = 0;
      rest >> name >> step;
      adam_steps.emplace_back(name, step);
    } else {
      throw CheckpointCorrupt("unknown header line: " + line);
    }
  }
  if (line != "end") throw CheckpointCorrupt("checkpoint header missing end marker");
  if (layers.size() != 5 || adam_steps.size() != 4) {
    throw CheckpointCorrupt("checkpoint header missing sections");
  }

  nets.actor = zeros_for(layers[0].second);
  nets.critic1 = zeros_for(layers[1].second);
  nets.critic2 = zeros_for(layers[2].second);
  nets.target1 = zeros_for(layers[3].second);
  nets.target2 = zeros_for(layers[4].second);
  read_params(in, nets.actor);
  read_params(in, nets.critic1);
  read_params(in, nets.critic2);
  read_params(in, nets.target1);
  read_params(in, nets.target2);
  in.read(reinterpret_cast<char*>(&nets.log_alpha), sizeof(double));
  if (in.gcount() != sizeof(double)) throw CheckpointCorrupt("checkpoint truncated at log_alpha");

  nets.opt_actor = nn::AdamState::like(nets.actor);
  nets.opt_critic1 = nn::AdamState::like(nets.critic1);
  nets.opt_critic2 = nn::AdamState::like(nets.critic2);
  nets.opt_alpha = nn::AdamState::scalar();
  nets.opt_actor.step = adam_steps[0].second;
  nets.opt_critic1.step = adam_steps[1].second;
  nets.opt_critic2.step = adam_steps[2].second;
  nets.opt_alpha.step = adam_steps[3].second;
  read_adam(in, nets.opt_actor);
  read_adam(in, nets.opt_critic1);
  read_adam(in, nets.opt_critic2);
  read_adam(in, nets.opt_alpha);

  if (meta) *meta = local;
  return nets;
}

}  // namespace pregrasp::io
