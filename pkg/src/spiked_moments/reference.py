"""Published reference values used by ``verify`` and the acceptance suite.

Numbers are kept as strings so they parse at whatever precision is active.
Intervals are ``(E_L, E_U, order)``.
"""

from __future__ import annotations

# Ground-state bounds from PSI moments; chain keys 0 and 1 are the decoupled
# even/odd chains at b = 0.
EMM_PSI = {
    ("0", None): ("1.999415", "2.000489", 29),
    ("0", 0): ("1.882144", "2.065301", 35),
    ("0", 1): ("1.946320", "2.199344", 36),
    (".1", None): ("1.870371", "1.871507", 28),
    (".5", None): ("1.428965", "1.429646", 30),
    ("1", None): ("1.032844", "1.033323", 28),
    ("5", None): (".515648", ".516333", 23),
    ("10", None): (".496295", ".524709", 16),
    ("20", None): (".457391", ".658807", 13),
}

# Ground-state bounds from the shifted Phi moments, keyed by (b, sigma).
EMM_PHI = {
    ("0", 0): ("1.999714", "2.000244", 27),
    ("0", 3): ("2", "2", 1),
    (".001", 3): ("1.9986710464441", "1.9986710464498", 16),
    (".01", 3): ("1.9867452618193", "1.9867452618204", 20),
    (".1", 0): ("1.870636", "1.871151", 27),
    (".1", 3): ("1.8709141846102", "1.8709141846107", 22),
    (".5", 0): ("1.429056", "1.429492", 30),
    (".5", 3): ("1.4292927197475", "1.4292927197522", 24),
    ("1", 0): ("1.032928", "1.033250", 27),
    ("1", 3): ("1.0331033239001", "1.0331033239766", 25),
    ("5", 0): ("0.51598078", "0.51598081", 18),
    ("5", 3): ("0.51591386", "0.51598114", 20),
    ("10", 0): ("0.5038074052", "0.5038074090", 13),
    ("20", 0): ("0.5009410333", "0.5009410338", 10),
    ("100", 0): ("0.5000375056", "0.5000375257", 7),
    ("1000", 0): ("0.500000375000431", "0.500000375004431", 7),
    ("2500", 0): ("0.500000059999800", "0.500000060003038", 6),
}

# Density-moment bounds keyed by (b, state).
EMM_PSI2 = {
    ("0", 0): ("1.99998825", "2.00005739", 26),
    ("0", 1): ("3.99671544", "4.00447362", 25),
    ("0", 2): ("5.91768300", "6.04294214", 26),
    (".1", 0): ("1.87090202", "1.87092049", 26),
    (".1", 1): ("3.82074273", "3.82158281", 28),
    (".1", 2): ("5.75422040", "5.82182702", 27),
    (".5", 0): ("1.42928910", "1.42929704", 30),
    (".5", 1): ("3.18388603", "3.18432342", 28),
    (".5", 2): ("4.97456267", "5.02884966", 27),
    ("1", 0): ("1.03310195", "1.03310458", 29),
    ("1", 1): ("2.55658870", "2.55901222", 27),
    ("1", 2): ("4.12209511", "4.19851998", 27),
    ("5", 0): ("0.51278794", "0.52143406", 22),
    ("5", 1): ("1.475", "1.855", 23),
}

# Algebraic-route energies E_0..E_3 at order 100.
AM_ENERGIES = {
    "0": ("2", "4", "6", "8"),
    ".5": ("1.4292927197", "3.184017114", "4.987971463", "6.820440707"),
    "1.0": ("1.0331033239", "2.557261915", "4.169923329", "5.837014390"),
    "1.5": ("0.7847675572", "2.107433725", "3.538491138", "5.044354682"),
    "2.0": ("0.6481322228", "1.816590914", "3.084658976", "4.436894490"),
    "2.5": ("0.5818553905", "1.655297046", "2.794166923", "4.007820744"),
    "3.0": ("0.5509509520", "1.580121756", "2.638483895", "3.743614149"),
    "3.5": ("0.5351717068", "1.547741639", "2.570043163", "3.611459829"),
    "4.0": ("0.5259688826", "1.532318972", "2.541876785", "3.557419442"),
    "4.5": ("0.5200471427", "1.523670892", "2.528557218", "3.535449712"),
    "5.0": ("0.5159807819", "1.518222436", "2.521046746", "3.524694536"),
    "5.5": ("0.5130560157", "1.514525084", "2.516293284", "3.518454199"),
    "6.0": ("0.5108767399", "1.511882954", "2.513054951", "3.514433855"),
    "6.5": ("0.5092067728", "1.509920644", "2.510731970", "3.511660509"),
    "7.0": ("0.5078974472", "1.508418730", "2.509000073", "3.509651653"),
    "7.5": ("0.5068510767", "1.507241028", "2.507669464", "3.508141930"),
    "8.0": ("0.5060011798", "1.506298942", "2.506622186", "3.506974079"),
    "8.5": ("0.5053011643", "1.505532597", "2.505781384", "3.506049402"),
    "9.0": ("0.5047175513", "1.504900234", "2.505095024", "3.505303077"),
    "9.5": ("0.5042257611", "1.504371940", "2.504526749", "3.504690917"),
    "10.0": ("0.5038074053", "1.503925798", "2.504050459", "3.504181861"),
}

# Real roots of the b = 0 determinant that are not of the form 2(n+1).
DETERMINANT_EXTRA_ROOTS = {
    4: (),
    5: ("4.254",),
    6: ("7.463",),
    7: ("5.708", "12.632"),
}

# Number of exact factors E - 2(n+1) in the b = 0 determinant.
DETERMINANT_EXACT_FACTORS = {4: 1, 5: 1, 6: 2, 7: 2, 8: 3, 10: 4, 20: 9, 30: 14}

# Eigencurve minima at b = 0.5: order -> ((E_min, log10 lambda), ...) per state.
BM_MINIMA = {
    10: (("1.5150470", "-0.84559280"), ("4.3969969", "-1.1623635")),
    11: (("1.4199646", "-0.82806681"), ("3.9889962", "-1.0852239")),
    12: (("1.4156228", "-0.80336151"), ("3.1875626", "-0.74234366"), ("5.1889348", "-0.97331160")),
    13: (("1.4301144", "-0.79832277"), ("3.1214643", "-0.51419926"), ("4.8564978", "-0.91784021")),
    14: (("1.4290630", "-0.79825893"), ("3.2393572", "-0.49476172"), ("6.0745714", "-0.73221637")),
    15: (("1.4289479", "-0.79757698"), ("3.1808773", "-0.48495873"), ("5.5858837", "-0.66854618")),
    16: (("1.4294188", "-0.79745638"), ("3.1790069", "-0.47258623"), ("4.9600850", "-0.54416892"),
         ("6.8883817", "-0.49025962")),
    17: (("1.4293205", "-0.79744519"), ("3.1863572", "-0.47115027"), ("4.9543391", "-0.47566983"),
         ("6.6591851", "-0.46057027")),
    18: (("1.4292787", "-0.79740046"), ("3.1841563", "-0.47087295"), ("5.0040638", "-0.46768132"),
         ("6.7008468", "-0.34041178")),
    19: (("1.4292932", "-0.79738417"), ("3.1837027", "-0.47025848"), ("4.9868242", "-0.46552191"),
         ("6.8641735", "-0.32407160")),
    20: (("1.4292967", "-0.79738248"), ("3.1840333", "-0.47013608"), ("4.9851930", "-0.46121438"),
         ("6.8069551", "-0.31888442")),
    30: (("1.4292931", "-0.79738040"), ("3.1840182", "-0.47012365"), ("4.9879738", "-0.46026542"),
         ("6.8204428", "-0.30655075")),
    40: (("1.4292928", "-0.79738016"), ("3.1840173", "-0.47012319"), ("4.9879718", "-0.46026461"),
         ("6.8204411", "-0.30655027")),
    50: (("1.4292927", "-0.79738012"), ("3.1840172", "-0.47012312"), ("4.9879716", "-0.46026449"),
         ("6.8204408", "-0.30655019")),
    60: (("1.4292927", "-0.79738011"), ("3.1840171", "-0.47012310"), ("4.9879715", "-0.46026446"),
         ("6.8204408", "-0.30655017")),
    70: (("1.42929272246", "-0.79738011"), ("3.18401712169", "-0.47012309"),
         ("4.98797147862", "-0.46026445"), ("6.82044072541", "-0.30655016")),
    80: (("1.42929272103", "-0.79738011"), ("3.18401711764", "-0.47012309"),
         ("4.98797147036", "-0.46026444"), ("6.82044071591", "-0.30655016")),
    90: (("1.42929272042", "-0.79738011"), ("3.18401711589", "-0.47012309"),
         ("4.98797146679", "-0.46026444"), ("6.82044071179", "-0.30655016")),
    100: (("1.42929272012", "-0.79738011"), ("3.18401711506", "-0.47012309"),
          ("4.98797146508", "-0.46026444"), ("6.82044070983", "-0.30655016")),
    150: (("1.42929271979", "-0.79738011"), ("3.18401711412", "-0.47012309"),
          ("4.98797146316", "-0.46026444"), ("6.82044070761", "-0.30655016")),
    200: (("1.42929271976", "-0.79738011"), ("3.18401711403", "-0.47012309"),
          ("4.98797146298", "-0.46026444"), ("6.82044070740", "-0.30655016")),
    250: (("1.429292719754", "-0.79738011"), ("3.18401711401", "-0.47012309"),
          ("4.98797146294", "-0.46026444"), ("6.82044070736", "-0.30655016")),
    300: (("1.429292719752", "-0.79738011"), ("3.18401711401", "-0.47012309"),
          ("4.98797146293", "-0.46026444"), ("6.82044070735", "-0.30655016")),
    350: (("1.4292927197517", "-0.79738011"), ("3.18401711400", "-0.47012309"),
          ("4.98797146293", "-0.46026444"), ("6.82044070734", "-0.30655016")),
}

# log10 of the coarse upper bounds used for the b = 0.5 intervals, per state.
BM_LOG10_BOUNDS = ("-.79738", "-.470123", "-.460264", "-.30655")

# Eigencurve-level-set intervals at b = 0.5: order -> ((E_L, E_U), ...) per state.
BM_INTERVALS = {
    10: (("1.355213912", "1.767314750"),),
    50: (("1.429292680", "1.429292800"), ("3.184017055", "3.184017276"),
         ("4.987971200", "4.987972000"), ("6.820440400", "6.820441200")),
    100: (("1.4292927126", "1.4292927276"), ("3.184017100", "3.184017130"),
          ("4.987971416", "4.987971512"), ("6.820440664", "6.820440752")),
    150: (("1.4292927172", "1.4292927224"), ("3.1840171096", "3.1840171186"),
          ("4.9879714476", "4.9879714784"), ("6.8204406948", "6.8204407212")),
}
