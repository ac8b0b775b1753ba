#include "generators.hpp"

#include <algorithm>
#include <cmath>

namespace opp::harness {

namespace {

// Parameter lookup: [params] section first, then top level, then fallback.
long long p_int(const IniDoc& doc, const std::string& key, long long fb) {
  if (doc.has("params", key)) return doc.get_int("params", key);
  if (doc.has("", key)) return doc.get_int("", key);
  return fb;
}

double p_double(const IniDoc& doc, const std::string& key, double fb) {
  if (doc.has("params", key)) return doc.get_double("params", key);
  if (doc.has("", key)) return doc.get_double("", key);
  return fb;
}

metric::MetricSpace random_metric_matrix(int m, Rng& rng) {
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      d[i][j] = d[j][i] = static_cast<double>(rng.uniform_int(1, 9));
  // shortest-path closure makes the raw weights a metric
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return metric::MetricSpace::matrix(d);
}

}  // namespace

MtsInstance gen_mts(const std::string& generator, const IniDoc& params, Rng& rng) {
  if (generator != "uniform") throw config_error("mts generator: unknown '" + generator + "'");
  int m = static_cast<int>(p_int(params, "m", 4));
  int n = static_cast<int>(p_int(params, "tasks", 12));
  if (m < 2 || m > 16) throw config_error("mts generator: m out of range");
  if (n < 1 || n > 100000) throw config_error("mts generator: tasks out of range");
  MtsInstance inst{random_metric_matrix(m, rng), 0, {}};
  inst.tasks.assign(n, std::vector<double>(m, 0.0));
  for (auto& task : inst.tasks)
    for (double& w : task) {
      double v = static_cast<double>(rng.uniform_int(0, 16));
      w = rng.uniform() < 0.25 ? 0.0 : v;
    }
  return inst;
}

KserverInstance gen_kserver(const std::string& generator, const IniDoc& params, Rng& rng) {
  KserverInstance inst;
  if (generator == "line") {
    int k = static_cast<int>(p_int(params, "k", 3));
    int n = static_cast<int>(p_int(params, "requests", 12));
    double server_span = p_double(params, "server_span", 100.0);
    double span = p_double(params, "span", 10000.0);
    if (k < 1 || k > 64) throw config_error("kserver generator: k out of range");
    if (n < 1 || n > 100000) throw config_error("kserver generator: requests out of range");
    // servers huddle in a short prefix so the pairwise starting spread is
    // negligible next to the optimum forced by the wide request range
    for (int i = 0; i < k; ++i)
      inst.servers.push_back(static_cast<double>(rng.uniform_int(0, static_cast<std::int64_t>(server_span))));
    for (int i = 0; i < n; ++i)
      inst.requests.push_back(static_cast<double>(rng.uniform_int(0, static_cast<std::int64_t>(span))));
    return inst;
  }
  if (generator == "tree") {
    inst.on_tree = true;
    int m = static_cast<int>(p_int(params, "vertices", 8));
    int k = static_cast<int>(p_int(params, "k", 3));
    int n = static_cast<int>(p_int(params, "requests", 12));
    if (m < 2 || m > 64) throw config_error("kserver generator: vertices out of range");
    if (k < 1 || k > m) throw config_error("kserver generator: k out of range");
    if (n < 1 || n > 100000) throw config_error("kserver generator: requests out of range");
    std::vector<int> parent(m);
    std::vector<double> weight(m, 0.0);
    parent[0] = -1;
    for (int i = 1; i < m; ++i) {
      parent[i] = static_cast<int>(rng.uniform_int(0, i - 1));
      weight[i] = static_cast<double>(rng.uniform_int(1, 9));
    }
    inst.space = metric::MetricSpace::tree(parent, weight);
    for (int i = 0; i < k; ++i)
      inst.server_vertices.push_back(static_cast<int>(rng.uniform_int(0, m - 1)));
    for (int i = 0; i < n; ++i)
      inst.request_vertices.push_back(static_cast<int>(rng.uniform_int(0, m - 1)));
    return inst;
  }
  throw config_error("kserver generator: unknown '" + generator + "'");
}

parking::ParkingInstance gen_parking(const std::string& generator, const IniDoc& params, Rng& rng) {
  parking::ParkingInstance inst;
  if (generator == "adversarial") {
    int n = static_cast<int>(p_int(params, "n", 10));
    double eps = p_double(params, "eps", 1e-6);
    return parking::adversarial_instance(n, eps);
  }
  if (generator == "line") {
    int n = static_cast<int>(p_int(params, "cars", 6));
    int band = static_cast<int>(p_int(params, "band", std::max(2 * n, 8)));
    double density = p_double(params, "density", 0.4);
    if (n < 1 || n > 200) throw config_error("parking generator: cars out of range");
    if (band < 2 || band > 2000) throw config_error("parking generator: band out of range");
    if (density < 0 || density > 0.9) throw config_error("parking generator: density out of range");
    // n + 1 guaranteed-vacant slots on each side of the goal band: parked
    // cars can push the occupied region at most one slot per arrival, so
    // every pricing round still sees vacant end slots
    int margin = n + 1;
    int m = band + 2 * margin;
    inst.slots.resize(m);
    double x = 0;
    for (int i = 0; i < m; ++i) {
      inst.slots[i] = x;
      x += static_cast<double>(rng.uniform_int(1, 9));
    }
    inst.occupied.assign(m, 0);
    for (int i = margin; i < margin + band; ++i) inst.occupied[i] = rng.uniform() < density ? 1 : 0;
    for (int i = 0; i < n; ++i)
      inst.goals.push_back(inst.slots[static_cast<std::size_t>(rng.uniform_int(margin, margin + band - 1))]);
    inst.validate();
    return inst;
  }
  if (generator == "clustered") {
    // two identical-shape far-apart clusters of n/2 cars each, all goals at
    // the cluster's center slot; the center gaps are kept >= 5 so the
    // optimum always exceeds the largest in-cluster gap
    int n = static_cast<int>(p_int(params, "cars", 8));
    if (n < 4 || n % 2 != 0 || n > 80) throw config_error("parking generator: cars must be even, in [4, 80]");
    int nc = n / 2;
    int mc = n + 1;  // slots per cluster
    auto cluster_gaps = [&]() {
      std::vector<double> g(mc - 1);
      for (int i = 0; i + 1 < mc; ++i) {
        if (i == nc - 1 || i == nc)
          g[i] = static_cast<double>(rng.uniform_int(5, 9));
        else if (rng.uniform() < 0.3)
          g[i] = rng.uniform(0.02, 0.2);
        else
          g[i] = static_cast<double>(rng.uniform_int(1, 9));
      }
      return g;
    };
    std::vector<std::vector<double>> gaps = {cluster_gaps(), cluster_gaps()};
    double span0 = 0, span1 = 0;
    for (double g : gaps[0]) span0 += g;
    for (double g : gaps[1]) span1 += g;
    double sep = 1000.0 * (std::max(span0, span1) + 10.0);
    double x = 0;
    for (int cl = 0; cl < 2; ++cl) {
      if (cl == 1) x = span0 + sep;
      double center = 0;
      for (int i = 0; i < mc; ++i) {
        inst.slots.push_back(x);
        if (i == nc) center = x;
        if (i + 1 < mc) x += gaps[static_cast<std::size_t>(cl)][static_cast<std::size_t>(i)];
      }
      for (int i = 0; i < nc; ++i) inst.goals.push_back(center);
    }
    inst.occupied.assign(inst.slots.size(), 0);
    inst.validate();
    return inst;
  }
  throw config_error("parking generator: unknown '" + generator + "'");
}

Instance generate_instance(const std::string& family, const std::string& generator,
                           const IniDoc& params, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  Instance inst;
  inst.family = family;
  if (family == "mts")
    inst.mts = gen_mts(generator, params, rng);
  else if (family == "kserver")
    inst.kserver = gen_kserver(generator, params, rng);
  else if (family == "parking")
    inst.parking = gen_parking(generator, params, rng);
  else
    throw config_error("generate: unknown family '" + family + "'");
  return inst;
}

namespace {

void space_to_doc(IniDoc& doc, const metric::MetricSpace& space) {
  switch (space.kind()) {
    case metric::SpaceKind::line:
      doc.set("space", "kind", "line");
      doc.set("space", "positions", join_doubles(space.positions()));
      break;
    case metric::SpaceKind::tree: {
      doc.set("space", "kind", "tree");
      std::vector<long long> parent;
      std::vector<double> weight;
      for (int v = 0; v < space.size(); ++v) {
        parent.push_back(space.parent()[static_cast<std::size_t>(v)]);
        weight.push_back(v == 0 ? 0.0 : space.edge_weight(v, space.parent()[static_cast<std::size_t>(v)]));
      }
      doc.set("space", "parent", join_ints(parent));
      doc.set("space", "weight", join_doubles(weight));
      break;
    }
    case metric::SpaceKind::matrix: {
      doc.set("space", "kind", "matrix");
      doc.set("space", "m", std::to_string(space.size()));
      for (int i = 0; i < space.size(); ++i) {
        std::vector<double> row;
        for (int j = 0; j < space.size(); ++j) row.push_back(space.distance(i, j));
        doc.set("space", "row" + std::to_string(i), join_doubles(row));
      }
      break;
    }
  }
}

metric::MetricSpace space_from_doc(const IniDoc& doc) {
  std::string kind = doc.get("space", "kind");
  if (kind == "line") return metric::MetricSpace::line(doc.get_doubles("space", "positions"));
  if (kind == "tree") {
    std::vector<int> parent;
    for (long long p : doc.get_ints("space", "parent")) parent.push_back(static_cast<int>(p));
    return metric::MetricSpace::tree(parent, doc.get_doubles("space", "weight"));
  }
  if (kind == "matrix") {
    int m = static_cast<int>(doc.get_int("space", "m"));
    std::vector<std::vector<double>> d;
    for (int i = 0; i < m; ++i) d.push_back(doc.get_doubles("space", "row" + std::to_string(i)));
    return metric::MetricSpace::matrix(d);
  }
  throw parse_error("instance: unknown space kind '" + kind + "'");
}

std::vector<long long> widen(const std::vector<int>& v) {
  return std::vector<long long>(v.begin(), v.end());
}

std::vector<int> narrow(const std::vector<long long>& v) {
  return std::vector<int>(v.begin(), v.end());
}

std::vector<char> mask_from_ints(const std::vector<long long>& v) {
  std::vector<char> out;
  for (long long x : v) {
    if (x != 0 && x != 1) throw parse_error("instance: occupancy mask entries must be 0 or 1");
    out.push_back(static_cast<char>(x));
  }
  return out;
}

}  // namespace

std::string instance_text(const Instance& inst) {
  IniDoc doc;
  doc.set("", "family", inst.family);
  if (inst.family == "mts") {
    const MtsInstance& m = *inst.mts;
    space_to_doc(doc, m.space);
    doc.set("mts", "s0", std::to_string(m.s0));
    doc.set("mts", "tasks", std::to_string(m.tasks.size()));
    for (std::size_t i = 0; i < m.tasks.size(); ++i)
      doc.set("mts", "task" + std::to_string(i), join_doubles(m.tasks[i]));
  } else if (inst.family == "kserver") {
    const KserverInstance& k = *inst.kserver;
    if (k.on_tree) {
      doc.set("kserver", "kind", "tree");
      space_to_doc(doc, *k.space);
      doc.set("kserver", "servers", join_ints(widen(k.server_vertices)));
      doc.set("kserver", "requests", join_ints(widen(k.request_vertices)));
    } else {
      doc.set("kserver", "kind", "line");
      doc.set("kserver", "servers", join_doubles(k.servers));
      doc.set("kserver", "requests", join_doubles(k.requests));
    }
  } else if (inst.family == "parking") {
    const parking::ParkingInstance& p = *inst.parking;
    std::vector<long long> occ(p.occupied.begin(), p.occupied.end());
    doc.set("parking", "slots", join_doubles(p.slots));
    doc.set("parking", "occupied", join_ints(occ));
    doc.set("parking", "goals", join_doubles(p.goals));
  } else {
    throw input_error("instance_text: unknown family '" + inst.family + "'");
  }
  return doc.canonical();
}

Instance instance_parse(const std::string& text) {
  IniDoc doc = IniDoc::parse_text(text);
  Instance inst;
  inst.family = doc.get("", "family");
  if (inst.family == "mts") {
    MtsInstance m{space_from_doc(doc), 0, {}};
    m.s0 = static_cast<int>(doc.get_int("mts", "s0"));
    long long n = doc.get_int("mts", "tasks");
    for (long long i = 0; i < n; ++i) {
      std::vector<double> task = doc.get_doubles("mts", "task" + std::to_string(i));
      if (static_cast<int>(task.size()) != m.space.size())
        throw parse_error("instance: task" + std::to_string(i) + " has wrong arity");
      m.tasks.push_back(std::move(task));
    }
    if (m.s0 < 0 || m.s0 >= m.space.size()) throw parse_error("instance: s0 out of range");
    inst.mts = std::move(m);
  } else if (inst.family == "kserver") {
    KserverInstance k;
    std::string kind = doc.get("kserver", "kind");
    if (kind == "tree") {
      k.on_tree = true;
      k.space = space_from_doc(doc);
      k.server_vertices = narrow(doc.get_ints("kserver", "servers"));
      k.request_vertices = narrow(doc.get_ints("kserver", "requests"));
      for (int v : k.server_vertices)
        if (v < 0 || v >= k.space->size()) throw parse_error("instance: server vertex out of range");
      for (int v : k.request_vertices)
        if (v < 0 || v >= k.space->size()) throw parse_error("instance: request vertex out of range");
    } else if (kind == "line") {
      k.servers = doc.get_doubles("kserver", "servers");
      k.requests = doc.get_doubles("kserver", "requests");
    } else {
      throw parse_error("instance: unknown kserver kind '" + kind + "'");
    }
    if ((k.on_tree ? k.server_vertices.empty() : k.servers.empty()))
      throw parse_error("instance: no servers");
    inst.kserver = std::move(k);
  } else if (inst.family == "parking") {
    parking::ParkingInstance p;
    p.slots = doc.get_doubles("parking", "slots");
    p.occupied = mask_from_ints(doc.get_ints("parking", "occupied"));
    p.goals = doc.get_doubles("parking", "goals");
    p.validate();
    inst.parking = std::move(p);
  } else {
    throw parse_error("instance: unknown family '" + inst.family + "'");
  }
  return inst;
}

Instance instance_load(const std::string& path) {
  try {
    return instance_parse(read_file(path));
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

}  // namespace opp::harness
