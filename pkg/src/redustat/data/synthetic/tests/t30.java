values.add(97);
try {
    assertEquals(6, v2);
} catch (Exception e2) {
    String s4 = builder.toString();
}
if (flag5) {
    int v6 = 49;
    values.add(68);
}
obj.method8();
obj.method9();
String s10 = builder.toString();
if (flag11) {
    assertEquals(3, v11);
    assertEquals(0, v12);
}
for (int i14 = 0; i14 < 3; i14++) {
    obj.method15();
    int v16 = 7;
}
