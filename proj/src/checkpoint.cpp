#include "isadre/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isadre {

namespace {
constexpr char kMagic[8] = {'I', 'S', 'A', 'D', 'R', 'E', 'C', '1'};

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

void put_doubles(std::ofstream& os, const std::vector<double>& v) {
  put<std::uint64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::ifstream& is) {
  const auto n = get<std::uint64_t>(is);
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw std::runtime_error("checkpoint: truncated parameter block");
  return v;
}

NetSpec read_header(std::ifstream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  NetSpec spec;
  spec.time_inputs = static_cast<int>(get<std::uint32_t>(is));
  spec.data_dim = static_cast<int>(get<std::uint32_t>(is));
  spec.time_freqs = static_cast<int>(get<std::uint32_t>(is));
  const auto n_hidden = get<std::uint32_t>(is);
  spec.hidden.resize(n_hidden);
  for (auto& h : spec.hidden) h = static_cast<int>(get<std::uint32_t>(is));
  return spec;
}
}  // namespace

void save_checkpoint(const std::string& path, const TrainState& state) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  os.write(kMagic, 8);
  const NetSpec& spec = state.net.spec();
  put<std::uint32_t>(os, static_cast<std::uint32_t>(spec.time_inputs));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(spec.data_dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(spec.time_freqs));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(spec.hidden.size()));
  for (int h : spec.hidden) put<std::uint32_t>(os, static_cast<std::uint32_t>(h));
  put<std::int64_t>(os, state.step);
  put<std::int64_t>(os, state.opt.step);
  put<std::int64_t>(os, state.opt.skipped);
  put_doubles(os, state.net.params().values());
  put_doubles(os, state.opt.m.values());
  put_doubles(os, state.opt.v.values());
  std::ostringstream rng;
  rng << state.rng;
  const std::string rng_text = rng.str();
  put<std::uint64_t>(os, rng_text.size());
  os.write(rng_text.data(), static_cast<std::streamsize>(rng_text.size()));
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

TrainState load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  NetSpec spec = read_header(is);
  TrainState state(spec);
  state.step = get<std::int64_t>(is);
  state.opt.step = get<std::int64_t>(is);
  state.opt.skipped = get<std::int64_t>(is);
  auto params = get_doubles(is);
  auto m = get_doubles(is);
  auto v = get_doubles(is);
  if (params.size() != state.net.params().size())
    throw std::runtime_error("checkpoint: parameter count does not match topology");
  state.net.params().values() = std::move(params);
  state.opt.m.values() = std::move(m);
  state.opt.v.values() = std::move(v);
  const auto rng_len = get<std::uint64_t>(is);
  std::string rng_text(rng_len, '\0');
  is.read(rng_text.data(), static_cast<std::streamsize>(rng_len));
  if (!is) throw std::runtime_error("checkpoint: truncated rng state");
  std::istringstream rng(rng_text);
  rng >> state.rng;
  return state;
}

NetSpec checkpoint_net_spec(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  return read_header(is);
}

}  // namespace isadre
