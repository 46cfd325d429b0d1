#include <charconv>
#include <fstream>
#include <sstream>

#include "entbound/cli.hpp"

namespace entbound::cli {

namespace {

double parse_real(const std::string& token, const std::string& context) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw UsageError("cannot parse number '" + token + "' in " + context);
  }
  return value;
}

std::vector<double> parse_list(const std::string& text, const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(parse_real(token, context));
  return out;
}

int as_party_count(double v, const std::string& context) {
  if (v != static_cast<int>(v)) throw UsageError(context + ": party count must be an integer");
  return static_cast<int>(v);
}

}  // namespace

StateSpec StateSpec::parse(const std::string& text) {
  StateSpec spec;
  const auto colon = text.find(':');
  const std::string head = colon == std::string::npos ? "" : text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "file") {
    if (tail.empty()) throw UsageError("file: state spec needs a path");
    spec.family = "file";
    spec.path = tail;
    return spec;
  }
  if (head == "ghz" || head == "w" || head == "horodecki" || head == "chessboard") {
    spec.family = head;
    spec.params = parse_list(tail, "state spec '" + text + "'");
    const std::size_t want = head == "chessboard" ? 6 : 1;
    if (spec.params.size() != want) {
      throw UsageError("state spec '" + text + "' expects " + std::to_string(want) + " parameter(s)");
    }
    return spec;
  }
  if (text.size() > 5 && text.substr(text.size() - 5) == ".json") {
    spec.family = "file";
    spec.path = text;
    return spec;
  }
  throw UsageError("unknown state spec '" + text +
                   "' (expected ghz:N, w:N, horodecki:A, chessboard:A,B,C,D,M,N or file:PATH)");
}

std::string StateSpec::to_string() const {
  if (family == "file") return "file:" + path;
  std::string out = family + ":";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += format_number(params[i]);
  }
  return out;
}

DensityMatrix StateSpec::build(std::optional<double> noise_p) const {
  DensityMatrix rho;
  try {
    if (family == "ghz") {
      rho = ghz(as_party_count(params.at(0), "ghz"));
    } else if (family == "w") {
      rho = w_state(as_party_count(params.at(0), "w"));
    } else if (family == "horodecki") {
      rho = horodecki(params.at(0));
    } else if (family == "chessboard") {
      ChessboardParams p{params[0], params[1], params[2], params[3], params[4], params[5]};
      rho = chessboard(p);
    } else if (family == "file") {
      rho = parse_state_file(path);
    } else {
      throw UsageError("unknown state family '" + family + "'");
    }
    if (noise_p) rho = mix_white_noise(rho, *noise_p);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return rho;
}

DensityMatrix parse_state_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw UsageError("matrix file must contain a JSON object");
  for (const char* key : {"local_dims", "re", "im"}) {
    if (!doc.contains(key)) throw UsageError(std::string("matrix file is missing '") + key + "'");
  }
  std::vector<int> local_dims;
  std::vector<std::vector<double>> re;
  std::vector<std::vector<double>> im;
  try {
    local_dims = doc.at("local_dims").get<std::vector<int>>();
    re = doc.at("re").get<std::vector<std::vector<double>>>();
    im = doc.at("im").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed matrix file: ") + e.what());
  }
  const std::size_t d = re.size();
  if (d == 0 || im.size() != d) throw UsageError("matrix file: 're' and 'im' must be d x d arrays");
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (re[i].size() != d || im[i].size() != d) {
      throw UsageError("matrix file: row " + std::to_string(i) + " does not have " +
                       std::to_string(d) + " entries");
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx(re[i][j], im[i][j]);
    }
  }
  return DensityMatrix(std::move(m), std::move(local_dims));
}

DensityMatrix parse_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open matrix file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("matrix file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_state_json(doc);
}

nlohmann::json state_to_json(const Matrix& m, const std::vector<int>& local_dims) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"local_dims", local_dims}, {"re", std::move(re)}, {"im", std::move(im)}};
}

void write_state_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << state_to_json(rho.matrix(), rho.local_dims()).dump() << '\n';
}

}  // namespace entbound::cli
