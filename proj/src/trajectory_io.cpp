#include "jumpplan/trajectory_io.hpp"

#include <fstream>
#include <sstream>

#include "jumpplan/error.hpp"
#include "jumpplan/kinematics.hpp"
#include "jumpplan/text.hpp"

namespace jumpplan::trajectory_io {

std::pair<LegPair, LegPair> column_pairs(Plane plane) {
  if (plane == Plane::sagittal) return {LegPair::front, LegPair::rear};
  return {LegPair::right, LegPair::left};
}

TrajectoryTable tabulate(const Trajectory& traj, const Stance& stance, const RobotParams& params) {
  const auto [front_pair, rear_pair] = column_pairs(stance.plane);
  TrajectoryTable table;
  table.rows.resize(traj.size());

  // Columns of one pair: forces, held joint angles, torques.
  auto fill = [&](LegPair pair, Vec2 TrajectoryRow::*force, Vec2 TrajectoryRow::*q,
                  Vec2 TrajectoryRow::*tau) {
    const bool lead = pair == stance.lead;
    if (!lead && pair != stance.push) return;
    const std::size_t contact = lead ? traj.lead_liftoff : traj.push_liftoff;
    const Vec2 foot = lead ? stance.lead_foot : stance.push_foot;
    const Vec2 offset = planar_hip_offset(params, stance.plane, pair);
    Vec2 held = Vec2::Zero();
    for (std::size_t k = 0; k < traj.size(); ++k) {
      TrajectoryRow& row = table.rows[k];
      const Vec2 f = lead ? traj.forces[k].lead : traj.forces[k].push;
      row.*force = f;
      if (k < contact) {
        const BodyState body = traj.body(k);
        try {
          const LegPoints lp = kin::joint_positions(body, offset, foot, params);
          held = Vec2(lp.joints.q_hip, lp.joints.q_knee);
          row.*tau = kin::joint_torques(held.x(), held.y(), unrotate_planar(body.theta, f), params);
        } catch (const ReachabilityError&) {
          row.*tau = Vec2::Zero();
        }
      }
      row.*q = held;
    }
  };
  fill(front_pair, &TrajectoryRow::f_front, &TrajectoryRow::q_front, &TrajectoryRow::tau_front);
  fill(rear_pair, &TrajectoryRow::f_rear, &TrajectoryRow::q_rear, &TrajectoryRow::tau_rear);

  for (std::size_t k = 0; k < traj.size(); ++k) {
    const BodyState b = traj.body(k);
    TrajectoryRow& row = table.rows[k];
    row.t = traj.time(k);
    row.x_c = b.x_c;
    row.z_c = b.z_c;
    row.theta = b.theta;
    row.vx = b.vx;
    row.vz = b.vz;
    row.omega = b.omega;
  }
  return table;
}

namespace {

std::array<double, 19> flatten(const TrajectoryRow& r) {
  return {r.t,           r.x_c,         r.z_c,        r.theta,       r.vx,
          r.vz,          r.omega,       r.f_front.x(), r.f_front.y(), r.f_rear.x(),
          r.f_rear.y(),  r.q_front.x(), r.q_front.y(), r.q_rear.x(),  r.q_rear.y(),
          r.tau_front.x(), r.tau_front.y(), r.tau_rear.x(), r.tau_rear.y()};
}

TrajectoryRow unflatten(const std::array<double, 19>& v) {
  TrajectoryRow r;
  r.t = v[0];
  r.x_c = v[1];
  r.z_c = v[2];
  r.theta = v[3];
  r.vx = v[4];
  r.vz = v[5];
  r.omega = v[6];
  r.f_front = {v[7], v[8]};
  r.f_rear = {v[9], v[10]};
  r.q_front = {v[11], v[12]};
  r.q_rear = {v[13], v[14]};
  r.tau_front = {v[15], v[16]};
  r.tau_rear = {v[17], v[18]};
  return r;
}

std::string header() {
  std::string h;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i > 0) h += ',';
    h += kColumns[i];
  }
  return h;
}

}  // namespace

std::string to_csv(const TrajectoryTable& table) {
  std::string out;
  if (table.infeasible) out += "# infeasible\n";
  out += header();
  out += '\n';
  for (const TrajectoryRow& row : table.rows) {
    const auto v = flatten(row);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ',';
      out += text::number(v[i], 9);
    }
    out += '\n';
  }
  return out;
}

TrajectoryTable from_csv(const std::string& text_in) {
  TrajectoryTable table;
  std::istringstream in(text_in);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') {
      if (line.find("infeasible") != std::string::npos) table.infeasible = true;
      continue;
    }
    if (line.empty()) continue;
    if (!have_header) {
      if (line != header()) throw ParseError("trajectory CSV: unexpected header", line_no);
      have_header = true;
      continue;
    }
    std::array<double, 19> v{};
    std::size_t col = 0, start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell =
          std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
      if (col >= v.size()) throw ParseError("trajectory CSV: too many columns", line_no);
      const auto num = text::parse_number(cell);
      if (!num) {
        throw ParseError("trajectory CSV: bad number in column " +
                             std::string(kColumns[col]), line_no);
      }
      v[col++] = *num;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (col != v.size()) throw ParseError("trajectory CSV: too few columns", line_no);
    table.rows.push_back(unflatten(v));
  }
  if (!have_header) throw ParseError("trajectory CSV: missing header", line_no + 1);
  if (table.rows.empty()) throw ParseError("trajectory CSV: no data rows", line_no + 1);
  return table;
}

void save(const TrajectoryTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_csv(table);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

TrajectoryTable load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str());
}

}  // namespace jumpplan::trajectory_io
