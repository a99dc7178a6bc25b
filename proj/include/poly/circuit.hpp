#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poly/error.hpp"

namespace poly {

struct Operator {
  std::string name;
  int inputs = 0;
  int outputs = 0;
  bool operator==(const Operator &) const = default;
};

class Signature {
public:
  Signature() = default;
  explicit Signature(std::vector<Operator> ops);

  void add(const Operator &op);
  const Operator *find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  const std::vector<Operator> &operators() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

private:
  std::vector<Operator> ops_;
};

// One end of a wire. node == -1 means the circuit boundary: for a source this
// is a circuit input index, for a target a circuit output index.
struct Port {
  int node = -1;
  int port = 0;
  bool operator==(const Port &) const = default;
  auto operator<=>(const Port &) const = default;
};

struct Node {
  std::string op;
  int nin = 0;
  int nout = 0;
  std::vector<Port> in; // in[j] is the source feeding input j
  bool operator==(const Node &) const = default;
};

// A circuit m -> n stored as a port graph. Each node input and each circuit
// output names the source it is wired to; linearity makes the converse map
// (targets) a function too.
struct Circuit {
  int m = 0;
  int n = 0;
  std::vector<Node> nodes;
  std::vector<Port> out;

  // Structural identity. Use canonical_form first for equality modulo exchange.
  bool operator==(const Circuit &) const = default;
  std::size_t size() const { return nodes.size(); }
};

// targets[v][p] is where output p of node v goes; index nodes.size() holds the
// targets of the circuit inputs.
std::vector<std::vector<Port>> wire_targets(const Circuit &c);

Circuit identity(int n);
Circuit generator(const Operator &op);
Circuit compose(const Circuit &f, const Circuit &g); // f above g
Circuit tensor(const Circuit &f, const Circuit &g);
Circuit tensor_all(const std::vector<Circuit> &parts);

// Throws Error(Domain) when linearity, arity or acyclicity is broken.
void validate(const Circuit &c);
bool is_acyclic(const Circuit &c);

Circuit canonical_form(const Circuit &c);
// order[i] is the node of c that becomes node i of canonical_form(c).
std::vector<int> canonical_order(const Circuit &c);
bool equal_mod_exchange(const Circuit &a, const Circuit &b);

// Structural serialisation; equal strings iff operator== holds.
std::string fingerprint(const Circuit &c);

bool uses_only(const Circuit &c, const Signature &sig);
bool is_connected(const Circuit &c);
// True when some circuit input is wired straight to a circuit output.
bool has_pass_through(const Circuit &c);

// Slicing into layers of side-by-side nodes; empty when the port graph admits
// no planar layout with its interface order.
struct Layer {
  int width = 0;                          // wires entering the layer
  std::vector<std::pair<int, int>> items; // (input-side offset, node index), left to right
};
std::optional<std::vector<Layer>> layers(const Circuit &c);

Circuit parse_circuit(std::string_view text, const Signature &sig);
std::string to_string(const Circuit &c);

constexpr const char *kHoleName = "[]";

struct Context {
  Circuit host;             // contains exactly one node named kHoleName
  int hole = -1;            // index of the hole node in host
  std::vector<int> matched; // matched node indices of the canonical host, ascending
  std::vector<int> mapping; // pattern node -> canonical host node
  int hole_inputs() const { return host.nodes[hole].nin; }
  int hole_outputs() const { return host.nodes[hole].nout; }
  std::string describe() const;
};

Context trivial_context(const Circuit &f);
std::vector<Context> find_matches(const Circuit &pattern, const Circuit &host);
Circuit apply_context(const Context &c, const Circuit &f);

} // namespace poly
