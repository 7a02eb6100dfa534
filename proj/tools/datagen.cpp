// Writes the bundled datasets under a target directory.
//
// balance_scale.csv is reconstructed exactly: the original data is the
// complete enumeration of (left-weight, left-distance, right-weight,
// right-distance) over {1..5}^4 labeled by the sign of LW*LD - RW*RD; the 49
// balanced ties are dropped, leaving 288 rows per class.
//
// The other four files are synthetic stand-ins for datasets that cannot be
// redistributed here. They reproduce the published shapes (dimension, class
// counts, Wisconsin's 16 missing-value rows) and approximate class geometry;
// swap in the original files for exact reproduction runs.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gdrc/rng.hpp"

using gdrc::Rng;

namespace {

int clip_round(double v, int lo, int hi) {
    const int r = static_cast<int>(std::lround(v));
    return std::max(lo, std::min(hi, r));
}

void write_balance(const std::string& dir) {
    std::ofstream out(dir + "/balance_scale.csv");
    out << "class,left_weight,left_distance,right_weight,right_distance\n";
    for (int lw = 1; lw <= 5; ++lw)
        for (int ld = 1; ld <= 5; ++ld)
            for (int rw = 1; rw <= 5; ++rw)
                for (int rd = 1; rd <= 5; ++rd) {
                    const int torque = lw * ld - rw * rd;
                    if (torque == 0) continue;  // the 49 'B' rows are not used
                    out << (torque > 0 ? 'L' : 'R') << ',' << lw << ',' << ld << ',' << rw << ','
                        << rd << '\n';
                }
}

void write_wisconsin(const std::string& dir) {
    // 699 rows, 9 integer features in 1..10, class 2 (benign, 458) or 4
    // (malignant, 241); 16 rows carry a missing bare-nuclei cell (14 benign,
    // 2 malignant), so 444/239 remain after the parser drops them.
    Rng rng(20240001);
    std::ofstream out(dir + "/wisconsin.csv");
    out << "clump_thickness,size_uniformity,shape_uniformity,adhesion,epithelial_size,"
           "bare_nuclei,bland_chromatin,normal_nucleoli,mitoses,class\n";

    const double benign_mean[9] = {2.96, 1.33, 1.44, 1.36, 2.11, 1.35, 2.10, 1.29, 1.06};
    const double benign_sd[9] = {1.4, 0.75, 0.85, 0.75, 0.8, 1.0, 0.95, 0.85, 0.4};
    const double malig_mean[9] = {7.19, 6.57, 6.56, 5.55, 5.30, 7.63, 5.98, 5.86, 2.59};
    const double malig_sd[9] = {2.4, 2.7, 2.6, 3.2, 2.4, 3.1, 2.3, 3.3, 2.5};

    struct Row {
        int cls;
        bool missing;
    };
    std::vector<Row> plan;
    for (int i = 0; i < 458; ++i) plan.push_back({2, i < 14});
    for (int i = 0; i < 241; ++i) plan.push_back({4, i < 2});
    rng.shuffle(plan);

    for (const Row& row : plan) {
        const bool malig = row.cls == 4;
        const double* mean = malig ? malig_mean : benign_mean;
        const double* sd = malig ? malig_sd : benign_sd;
        // One latent severity factor per case keeps features correlated the
        // way graded pathology scores are.
        const double latent = rng.normal();
        const double load = malig ? 0.75 : 0.55;
        for (int j = 0; j < 9; ++j) {
            const double noise = std::sqrt(1.0 - load * load) * rng.normal();
            const int v = clip_round(mean[j] + sd[j] * (load * latent + noise), 1, 10);
            if (row.missing && j == 5)
                out << '?';
            else
                out << v;
            out << ',';
        }
        out << row.cls << '\n';
    }
}

void write_ionosphere(const std::string& dir) {
    // 351 rows, 34 continuous features in [-1, 1], 225 'g' / 126 'b'.
    Rng rng(20240002);
    std::ofstream out(dir + "/ionosphere.csv");
    out << "class";
    for (int j = 0; j < 34; ++j) out << ",a" << (j + 1);
    out << '\n';

    auto emit = [&](char cls, bool good) {
        out << cls;
        // Radar-return flavor: good echoes keep a coherent damped envelope,
        // bad ones lose the envelope and gain noise. The envelope mean
        // difference in the early taps carries most of the linear signal.
        const double phase = 0.35 * rng.normal();
        const double damp = good ? 0.035 + 0.03 * rng.uniform() : 0.07 + 0.09 * rng.uniform();
        const double amp = good ? 0.55 + 0.45 * rng.uniform() : 0.2 + 0.55 * rng.uniform();
        const double noise = good ? 0.30 : 0.46;
        for (int j = 0; j < 34; ++j) {
            const double t = static_cast<double>(j);
            const double envelope = amp * std::exp(-damp * t);
            double v = envelope * std::cos(0.45 * t + phase) + noise * rng.normal();
            if (j % 2 == 0) v = envelope * (0.9 + 0.1 * std::cos(phase)) + noise * rng.normal();
            v = std::max(-1.0, std::min(1.0, v));
            char buf[16];
            std::snprintf(buf, sizeof buf, "%.5f", v);
            out << ',' << buf;
        }
        out << '\n';
    };
    std::vector<int> labels(351, 0);
    for (int i = 0; i < 225; ++i) labels[i] = 1;
    rng.shuffle(labels);
    for (int lab : labels) emit(lab ? 'g' : 'b', lab != 0);
}

void write_mushrooms(const std::string& dir) {
    // 8124 rows, 22 one-hot categorical attributes totalling 112 indicator
    // columns, 3916 positive / 4208 negative; nearly separable, like the
    // original's odor attribute.
    Rng rng(20240003);
    std::ofstream out(dir + "/mushrooms.svmlight");
    const int sizes[22] = {6, 4, 10, 2, 9, 2, 2, 2, 12, 2, 5,
                           4, 4, 4, 9, 9, 4, 3, 5, 9, 3, 2};
    std::vector<int> labels(8124, 0);
    for (int i = 0; i < 3916; ++i) labels[i] = 1;
    rng.shuffle(labels);

    for (int lab : labels) {
        out << (lab ? "1" : "2");
        int base = 0;
        for (int a = 0; a < 22; ++a) {
            const int k = sizes[a];
            int pick;
            if (a == 4) {
                // The decisive attribute: classes use near-disjoint category
                // sets with a 0.4% crossover.
                const bool cross = rng.uniform() < 0.004;
                const bool side = (lab == 1) != cross;
                pick = side ? static_cast<int>(rng.below(4)) : 4 + static_cast<int>(rng.below(5));
            } else {
                // Mildly class-skewed multinomials elsewhere.
                const double tilt = lab ? 0.35 : 0.65;
                pick = rng.uniform() < tilt ? static_cast<int>(rng.below((k + 1) / 2))
                                            : static_cast<int>(rng.below(k));
            }
            out << ' ' << (base + pick + 1) << ":1";
            base += k;
        }
        out << '\n';
    }
}

void write_codrna(const std::string& dir) {
    // 59535 rows, 8 features, 19845 positive / 39690 negative, moderate
    // class overlap.
    Rng rng(20240004);
    std::ofstream out(dir + "/codrna.svmlight");
    const double pos_mean[8] = {1.25, -0.55, 0.95, 0.7, -0.4, 0.85, 0.3, -0.7};
    const double neg_mean[8] = {-0.4, 0.4, -0.3, -0.55, 0.4, -0.3, -0.4, 0.4};
    const double sds[8] = {1.1, 0.9, 1.3, 1.0, 0.8, 1.2, 1.0, 0.9};
    std::vector<int> labels(59535, 0);
    for (int i = 0; i < 19845; ++i) labels[i] = 1;
    rng.shuffle(labels);

    char buf[32];
    for (int lab : labels) {
        out << (lab ? "1" : "-1");
        const double* mean = lab ? pos_mean : neg_mean;
        for (int j = 0; j < 8; ++j) {
            const double v = mean[j] + sds[j] * rng.normal();
            std::snprintf(buf, sizeof buf, "%.4f", v);
            out << ' ' << (j + 1) << ':' << buf;
        }
        out << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    write_balance(dir);
    write_wisconsin(dir);
    write_ionosphere(dir);
    write_mushrooms(dir);
    write_codrna(dir);
    std::printf("wrote balance_scale.csv wisconsin.csv ionosphere.csv mushrooms.svmlight "
                "codrna.svmlight under %s/\n",
                dir.c_str());
    return 0;
}
