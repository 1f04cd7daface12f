"""Published reference values used by the ``verify`` command."""

# M(2**n)
M_POW2 = {
    0: 1,
    1: 0,
    2: -1,
    3: -2,
    4: -1,
    5: -4,
    6: -1,
    7: -2,
    8: -1,
    9: -4,
    10: -4,
    11: 7,
    12: -19,
    13: 22,
    14: -32,
    15: 26,
    16: 14,
    17: -20,
    18: 24,
    19: -125,
    20: 257,
    21: -362,
    22: 228,
    23: -10,
    24: 211,
    25: -1042,
    26: 329,
    27: 330,
    28: -1703,
    29: 6222,
    30: -10374,
    31: 9569,
    32: 1814,
    33: -10339,
    34: -3421,
    35: 8435,
    36: 38176,
    37: -28118,
    38: 38729,
    39: -135944,
    40: 101597,
    41: 15295,
    42: -169338,
    43: 259886,
    44: -474483,
    45: 1726370,
    46: -3554573,
    47: -135443,
    48: 3282200,
    49: 1958235,
    50: -1735147,
    51: 6657834,
    52: -13927672,
    53: -11901414,
    54: 48662015,
    55: -48361472,
    56: 23952154,
    57: 51885062,
    58: -15415164,
    59: -89014828,
    60: -48425659,
    61: 220660381,
    62: -248107163,
    63: 580197744,
    64: -851764249,
    65: 809210153,
    66: -1220538763,
    67: -925696220,
    68: 2092394726,
    69: -3748189801,
    70: 9853266869,
    71: -12658250658,
    72: 9558471405,
    73: -6524408924,
}

# V(10**n): zeros of M below 10**n
V_POW10 = {1: 1, 2: 6, 3: 92, 4: 406, 5: 1549, 6: 5361, 7: 12546, 8: 41908, 9: 141121}

# a large value of M(n)/sqrt(n)
EXTREMUM = (7_766_842_813, 50286)
