#include "ftsurf/pauli.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>
#include <stdexcept>

namespace ftsurf {

namespace {

void normalize(std::vector<Qubit>& v) {
  std::sort(v.begin(), v.end());
  // Repeated entries cancel pairwise.
  std::vector<Qubit> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(v[i]);
    i = j;
  }
  v = std::move(out);
}

std::size_t intersection_size(const std::vector<Qubit>& a, const std::vector<Qubit>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

bool contains(const std::vector<Qubit>& v, Qubit q) {
  return std::binary_search(v.begin(), v.end(), q);
}

}  // namespace

std::vector<Qubit> symmetric_difference(const std::vector<Qubit>& a,
                                        const std::vector<Qubit>& b) {
  std::vector<Qubit> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

PauliString::PauliString(std::vector<Qubit> x_support, std::vector<Qubit> z_support)
    : x_(std::move(x_support)), z_(std::move(z_support)) {
  normalize(x_);
  normalize(z_);
}

PauliString PauliString::xs(std::span<const Qubit> qs) {
  return PauliString(std::vector<Qubit>(qs.begin(), qs.end()), {});
}

PauliString PauliString::zs(std::span<const Qubit> qs) {
  return PauliString({}, std::vector<Qubit>(qs.begin(), qs.end()));
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Qubit> xs;
  std::vector<Qubit> zs;
  if (text.empty() || text == "I") return {};
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('*', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view term = text.substr(pos, end - pos);
    if (term.size() < 2) throw std::invalid_argument("bad Pauli term '" + std::string(term) + "'");
    Qubit q = 0;
    auto [ptr, ec] = std::from_chars(term.data() + 1, term.data() + term.size(), q);
    if (ec != std::errc() || ptr != term.data() + term.size()) {
      throw std::invalid_argument("bad qubit index in '" + std::string(term) + "'");
    }
    switch (term[0]) {
      case 'X': xs.push_back(q); break;
      case 'Z': zs.push_back(q); break;
      case 'Y':
        xs.push_back(q);
        zs.push_back(q);
        break;
      default:
        throw std::invalid_argument("bad Pauli letter in '" + std::string(term) + "'");
    }
    pos = end + 1;
  }
  return PauliString(std::move(xs), std::move(zs));
}

bool PauliString::has_x(Qubit q) const { return contains(x_, q); }
bool PauliString::has_z(Qubit q) const { return contains(z_, q); }

char PauliString::at(Qubit q) const {
  const bool x = has_x(q);
  const bool z = has_z(q);
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::vector<Qubit> PauliString::support() const {
  std::vector<Qubit> out;
  std::set_union(x_.begin(), x_.end(), z_.begin(), z_.end(), std::back_inserter(out));
  return out;
}

std::size_t PauliString::weight() const {
  return x_.size() + z_.size() - intersection_size(x_, z_);
}

PauliString& PauliString::operator*=(const PauliString& other) {
  x_ = symmetric_difference(x_, other.x_);
  z_ = symmetric_difference(z_, other.z_);
  return *this;
}

std::string PauliString::to_string() const {
  const auto qs = support();
  if (qs.empty()) return "I";
  std::string out;
  for (Qubit q : qs) {
    if (!out.empty()) out += '*';
    out += at(q);
    out += std::to_string(q);
  }
  return out;
}

int commutes(const PauliString& a, const PauliString& b) {
  const auto n = intersection_size(a.x_support(), b.z_support()) +
                 intersection_size(a.z_support(), b.x_support());
  return static_cast<int>(n % 2);
}

PauliString conjugate(const Gate& gate, const PauliString& p) {
  const auto& qs = gate.qubits;
  auto require = [&](std::size_t n) {
    if (qs.size() != n) throw std::invalid_argument("wrong qubit count for gate");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (qs[i] == qs[j]) throw std::invalid_argument("gate qubits must be distinct");
      }
    }
  };
  std::vector<Qubit> xs = p.x_support();
  std::vector<Qubit> zs = p.z_support();
  switch (gate.kind) {
    case GateKind::H: {
      require(1);
      const Qubit q = qs[0];
      const bool x = p.has_x(q);
      const bool z = p.has_z(q);
      if (x != z) {
        // Toggle q in both sets swaps X and Z; Y is left alone.
        xs.push_back(q);
        zs.push_back(q);
      }
      break;
    }
    case GateKind::CZ: {
      require(2);
      if (p.has_x(qs[0])) zs.push_back(qs[1]);
      if (p.has_x(qs[1])) zs.push_back(qs[0]);
      break;
    }
    case GateKind::CZZ: {
      require(3);
      if (p.has_x(qs[0])) {
        zs.push_back(qs[1]);
        zs.push_back(qs[2]);
      }
      if (p.has_x(qs[1])) zs.push_back(qs[0]);
      if (p.has_x(qs[2])) zs.push_back(qs[0]);
      break;
    }
    default:
      throw std::invalid_argument("unknown gate kind");
  }
  return PauliString(std::move(xs), std::move(zs));
}

}  // namespace ftsurf
